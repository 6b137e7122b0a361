"""Quantitative models behind the eight discovery themes.

Pure functions of (rng, difficulty): dataset generators, ground-truth
dynamics, and instrument reading semantics. No world or I/O dependencies,
so every generator can be oracled directly in tests.
"""

from __future__ import annotations

import math

from .rng import RngStream

INCONCLUSIVE = "The results were inconclusive."


# ---------------------------------------------------------------------------
# small numeric helpers (closed-form, dependency-free)

def linfit(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """Least-squares line fit: returns (slope, intercept)."""
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    denom = n * sxx - sx * sx
    if denom == 0:
        raise ValueError("degenerate x values")
    m = (n * sxy - sx * sy) / denom
    b = (sy - m * sx) / n
    return m, b


def quadfit(xs: list[float], ys: list[float]) -> tuple[float, float, float]:
    """Exact quadratic through/over points: solves the normal equations.

    For 3 distinct points this is the interpolating parabola; for more, the
    least-squares fit. Returns (a, b, c) for y = a*x^2 + b*x + c.
    """
    # build normal equations for [x^2, x, 1]
    s = [0.0] * 5
    for x in xs:
        for k in range(5):
            s[k] += x ** k
    t = [0.0] * 3
    for x, y in zip(xs, ys):
        t[0] += y * x * x
        t[1] += y * x
        t[2] += y
    mat = [
        [s[4], s[3], s[2], t[0]],
        [s[3], s[2], s[1], t[1]],
        [s[2], s[1], s[0], t[2]],
    ]
    # Gaussian elimination with partial pivoting
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(mat[r][col]))
        if abs(mat[piv][col]) < 1e-12:
            raise ValueError("singular system")
        mat[col], mat[piv] = mat[piv], mat[col]
        for r in range(3):
            if r != col:
                f = mat[r][col] / mat[col][col]
                for c in range(col, 4):
                    mat[r][c] -= f * mat[col][c]
    a, b, c = (mat[i][3] / mat[i][i] for i in range(3))
    return a, b, c


def r_squared(xs: list[float], ys: list[float]) -> float:
    """Coefficient of determination of the least-squares line."""
    m, b = linfit(xs, ys)
    mean_y = sum(ys) / len(ys)
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    ss_res = sum((y - (m * x + b)) ** 2 for x, y in zip(xs, ys))
    if ss_tot == 0:
        return 1.0
    return 1.0 - ss_res / ss_tot


def pearson_r(xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    if vx == 0 or vy == 0:
        return 0.0
    return cov / math.sqrt(vx * vy)


def cosine(u: dict, v: dict) -> float:
    keys = set(u) | set(v)
    dot = sum(u.get(k, 0) * v.get(k, 0) for k in keys)
    nu = math.sqrt(sum(x * x for x in u.values()))
    nv = math.sqrt(sum(x * x for x in v.values()))
    if nu == 0 or nv == 0:
        raise ValueError("ZERO_VECTOR: cosine of zero vector")
    return dot / (nu * nv)


# ---------------------------------------------------------------------------
# proteomics: outlier species on a protein-space sphere

SPECIES_POOL = [
    "spheroid", "animaplant", "vortisquid", "prismatic beast", "echojelly",
    "quillfin", "lumenmoth", "gravelback", "whorlcat", "mistbloom",
]
PROTEIN_NAMES = ["Protein A", "Protein B", "Protein C"]

R_INLIER = 0.1
R_OUTLIER = 0.4


def gen_cluster(rng: RngStream, difficulty: str) -> dict:
    """Species protein values: inliers on a tight sphere, one far outlier.

    Center is kept away from the unit-cube walls so both radii fit without
    clamping, preserving exact distances.
    """
    dims = 3 if difficulty == "challenge" else 2
    count = 3 if difficulty == "easy" else 5
    center = [rng.uniform(0.41, 0.59) for _ in range(dims)]
    names = rng.sample(SPECIES_POOL, count)
    outlier_idx = rng.randint(0, count - 1)
    species = []
    for i, name in enumerate(names):
        radius = R_OUTLIER if i == outlier_idx else R_INLIER
        direction = rng.unit_vector(dims)
        point = [center[j] + radius * direction[j] for j in range(dims)]
        species.append({"name": name, "point": point, "is_outlier": i == outlier_idx})
    return {
        "dims": dims,
        "center": center,
        "r_in": R_INLIER,
        "r_out": R_OUTLIER,
        "species": species,
    }


def protein_reading(point: list[float]) -> str:
    parts = [f"{PROTEIN_NAMES[i]}: {point[i]:.2f}" for i in range(len(point))]
    return ", ".join(parts)


# ---------------------------------------------------------------------------
# chemistry: rust removal by mixture ratio

CHEM_NAMES = ["Chemical A", "Chemical B", "Chemical C", "Chemical D"]

RUST_LEVELS = ["removed", "light", "moderate", "heavy"]
RUST_LEVEL_ORDER = {"removed": 0, "light": 1, "moderate": 2, "heavy": 3}
RUST_COS_LIGHT = 0.9
RUST_COS_MODERATE = 0.5


def gen_mixture_target(rng: RngStream, difficulty: str) -> dict:
    """Hidden cleaning-solution recipe in integer parts."""
    if difficulty == "easy":
        chems = CHEM_NAMES[:4]
        target = {rng.choice(chems): 1}
    elif difficulty == "normal":
        chems = CHEM_NAMES[:3]
        picked = rng.sample(chems, 2)
        target = {c: rng.randint(1, 3) for c in picked}
    else:
        chems = CHEM_NAMES[:4]
        picked = rng.sample(chems, 3)
        target = {c: rng.randint(1, 3) for c in picked}
    return {"chemicals": chems, "target": target}


def _is_exact_ratio(mix: dict, target: dict) -> bool:
    """mix == k * target for some positive rational k (integer-exact)."""
    keys = set(mix) | set(target)
    pairs = []
    for k in keys:
        a, b = mix.get(k, 0), target.get(k, 0)
        if (a == 0) != (b == 0):
            return False
        if a and b:
            pairs.append((a, b))
    if not pairs:
        return False
    a0, b0 = pairs[0]
    return all(a * b0 == a0 * b for a, b in pairs[1:])


def rust_response(mix: dict, target: dict) -> str:
    """Rust level after applying a mixture, from ratio match / cosine."""
    if not mix or all(v <= 0 for v in mix.values()):
        raise ValueError("ZERO_VECTOR: empty mixture")
    if _is_exact_ratio(mix, target):
        return "removed"
    cos = cosine(mix, target)
    if cos >= RUST_COS_LIGHT:
        return "light"
    if cos >= RUST_COS_MODERATE:
        return "moderate"
    return "heavy"


# ---------------------------------------------------------------------------
# archaeology: radioisotope decay vs distractor channels

KNOWN_ARTIFACT_SPECS = [
    ("iron hatchet", 1500, 3000),
    ("bronze chisel", 3500, 5500),
    ("stone hammer", 6000, 10000),
]
UNKNOWN_ARTIFACT_NAMES = [
    "ceramic shard", "carved idol", "bone flute", "amber pendant", "woven basket",
]
N_CHANNELS = 4


def gen_isotope_table(rng: RngStream, difficulty: str) -> dict:
    """Dig-site artifacts with one decay-law channel and R^2 < 0.1 noise.

    Known artifacts (signs state their age) are ordered stone > bronze >
    iron. The correct channel reads A*exp(-lam*age), strictly decreasing in
    age; every other channel is resampled until it carries no linear signal.
    """
    n_unknown = 2 if difficulty == "easy" else 3
    artifacts = []
    for name, lo, hi in KNOWN_ARTIFACT_SPECS:
        artifacts.append({"name": name, "age": rng.randint(lo, hi), "known": True})
    ages_used = {a["age"] for a in artifacts}
    names = rng.sample(UNKNOWN_ARTIFACT_NAMES, n_unknown)
    for name in names:
        while True:
            age = rng.randint(1200, 11000)
            if all(abs(age - u) >= 100 for u in ages_used):
                break
        ages_used.add(age)
        artifacts.append({"name": name, "age": age, "known": False})

    a_coef = rng.uniform(50, 150)
    lam = rng.uniform(1e-4, 3e-4)
    correct = rng.randint(0, N_CHANNELS - 1)
    ages = [art["age"] for art in artifacts]
    for ch in range(N_CHANNELS):
        if ch == correct:
            readings = [a_coef * math.exp(-lam * age) for age in ages]
        else:
            while True:
                readings = [rng.uniform(1, 100) for _ in ages]
                if r_squared(ages, readings) < 0.1:
                    break
        for art, r in zip(artifacts, readings):
            art.setdefault("readings", []).append(round(r, 3))
    return {
        "artifacts": artifacts,
        "correct_channel": correct,
        "decay": {"A": a_coef, "lam": lam},
    }


def oldest_unknown(table: dict) -> str:
    unknowns = [a for a in table["artifacts"] if not a["known"]]
    return max(unknowns, key=lambda a: a["age"])["name"]


# ---------------------------------------------------------------------------
# reactor lab: crystal frequency regression

CRITICAL_PROPS = ["density", "temperatureC", "radiationusvh", "ph"]
PROP_RANGES = {
    "density": (2, 20),
    "temperatureC": (5, 95),
    "radiationusvh": (1, 40),
    "ph": (1, 14),
}
PROP_INSTRUMENT = {
    "density": "densitometer",
    "temperatureC": "thermometer",
    "radiationusvh": "radiationmeter",
    "ph": "phmeter",
}


def relation_value(kind: str, coeffs: list[int], x: float) -> float:
    if kind == "slope":
        return coeffs[0] * x
    if kind == "linear":
        return coeffs[0] * x + coeffs[1]
    if kind == "quadratic":
        return coeffs[0] * x * x + coeffs[1] * x + coeffs[2]
    raise ValueError(f"unknown relation kind: {kind}")


def gen_crystal_relation(rng: RngStream, difficulty: str) -> dict:
    """Integer-coefficient relation between one reading and frequency.

    Known crystals satisfy the relation exactly. Non-critical readings are
    resampled until they carry no usable correlation with frequency (easy
    worlds carry only the critical instrument, so the guard is skipped
    there).
    """
    if difficulty == "easy":
        kind, n_known, n_unknown = "slope", 1, 1
        coeffs = [rng.randint(5, 120)]
    elif difficulty == "normal":
        kind, n_known, n_unknown = "linear", 2, 2
        coeffs = [rng.randint(5, 120), rng.randint(50, 150)]
    else:
        kind, n_known, n_unknown = "quadratic", 3, 2
        coeffs = [rng.randint(1, 9), rng.randint(5, 60), rng.randint(50, 150)]

    critical = rng.choice(CRITICAL_PROPS)
    lo, hi = PROP_RANGES[critical]
    total = n_known + n_unknown
    while True:
        xs = rng.sample(list(range(lo, hi + 1)), total)
        if max(xs) - min(xs) >= 3:
            break
    freqs = [int(relation_value(kind, coeffs, x)) for x in xs]

    crystals = []
    for i in range(total):
        readings = {critical: xs[i]}
        crystals.append({
            "name": f"quantum crystal {i + 1}",
            "index": i + 1,
            "readings": readings,
            "freq": freqs[i],
            "known": i < n_known,
        })

    if difficulty != "easy":
        for prop in CRITICAL_PROPS:
            if prop == critical:
                continue
            plo, phi = PROP_RANGES[prop]
            while True:
                vals = [rng.randint(plo, phi) for _ in range(total)]
                if len(set(vals)) > 1 and abs(pearson_r(vals, freqs)) < 0.3:
                    break
            for c, v in zip(crystals, vals):
                c["readings"][prop] = v
    else:
        for prop in CRITICAL_PROPS:
            if prop != critical:
                base = rng.randint(*PROP_RANGES[prop])
                for c in crystals:
                    c["readings"][prop] = base

    return {"kind": kind, "coeffs": coeffs, "critical_prop": critical, "crystals": crystals}


def relation_formula_text(rel: dict) -> str:
    """Human-readable gold formula, used in knowledge rubrics."""
    instr = PROP_INSTRUMENT[rel["critical_prop"]]
    c = rel["coeffs"]
    if rel["kind"] == "slope":
        return f"frequency = {c[0]} * ({instr} reading)"
    if rel["kind"] == "linear":
        return f"frequency = ({c[0]} * {instr} reading) + {c[1]}"
    return f"frequency = ({c[0]} * reading^2) + ({c[1]} * reading) + {c[2]} ({instr})"


# ---------------------------------------------------------------------------
# plant nutrients: growth rules over soil assignments

NUTRIENTS = ["nitrogen", "phosphorus", "potassium", "titanium", "lithium"]
LEVELS3 = ["low", "medium", "high"]
LEVELS2 = ["absent", "present"]
PILOT_PLOTS = 12


def rule_levels(rule: dict) -> list[str]:
    return LEVELS3 if rule["form"] == "at_value" else LEVELS2


def eval_nutrient_rule(rule: dict, soil: dict) -> bool:
    """Truth value of a growth rule on one soil assignment."""
    levels = rule_levels(rule)
    for n in NUTRIENTS:
        if soil.get(n) not in levels:
            raise ValueError(f"BAD_LEVEL: {n}={soil.get(n)!r}")
    form = rule["form"]
    if form == "presence":
        return soil[rule["nutrient"]] == "present"
    if form == "at_value":
        return soil[rule["nutrient"]] == rule["level"]
    if form == "formula":
        return _eval_expr(rule["expr"], soil)
    raise ValueError(f"unknown rule form: {form}")


def _eval_expr(expr: list, soil: dict) -> bool:
    op = expr[0]
    if op == "present":
        return soil[expr[1]] == "present"
    if op == "not":
        return not _eval_expr(expr[1], soil)
    if op == "and":
        return _eval_expr(expr[1], soil) and _eval_expr(expr[2], soil)
    if op == "or":
        return _eval_expr(expr[1], soil) or _eval_expr(expr[2], soil)
    if op == "xor":
        return _eval_expr(expr[1], soil) != _eval_expr(expr[2], soil)
    raise ValueError(f"unknown connective: {op}")


def expr_text(expr: list) -> str:
    op = expr[0]
    if op == "present":
        return f"{expr[1]} present"
    if op == "not":
        return f"NOT ({expr_text(expr[1])})"
    return f"({expr_text(expr[1])}) {op.upper()} ({expr_text(expr[2])})"


def _random_soil(rng: RngStream, levels: list[str]) -> dict:
    return {n: rng.choice(levels) for n in NUTRIENTS}


def gen_nutrient_rule(rng: RngStream, difficulty: str) -> dict:
    """Growth rule plus a 12-plot pilot field consistent with it."""
    if difficulty == "easy":
        rule: dict = {"form": "presence", "nutrient": rng.choice(NUTRIENTS)}
    elif difficulty == "normal":
        rule = {
            "form": "at_value",
            "nutrient": rng.choice(NUTRIENTS),
            "level": rng.choice(LEVELS3),
        }
    else:
        a, b = rng.sample(NUTRIENTS, 2)
        shape = rng.choice(["xor", "and_not", "or", "and"])
        lit_a: list = ["present", a]
        lit_b: list = ["present", b]
        if shape == "xor":
            expr = ["xor", lit_a, lit_b]
        elif shape == "and_not":
            expr = ["and", lit_a, ["not", lit_b]]
        elif shape == "or":
            expr = ["or", lit_a, lit_b]
        else:
            expr = ["and", lit_a, lit_b]
        rule = {"form": "formula", "expr": expr}

    levels = rule_levels(rule)
    while True:
        pilot = []
        for _ in range(PILOT_PLOTS):
            soil = _random_soil(rng, levels)
            pilot.append({"soil": soil, "grew": eval_nutrient_rule(rule, soil)})
        n_pos = sum(1 for p in pilot if p["grew"])
        if n_pos == 0 or n_pos == PILOT_PLOTS:
            continue
        if rule["form"] == "at_value" and not _at_value_unique(rule, pilot):
            continue
        break
    return {"rule": rule, "pilot": pilot}


def _at_value_unique(rule: dict, pilot: list[dict]) -> bool:
    """Positives must single out exactly one presence-at-value candidate."""
    positives = [p["soil"] for p in pilot if p["grew"]]
    consistent = []
    for n in NUTRIENTS:
        for lv in LEVELS3:
            if all(s[n] == lv for s in positives):
                consistent.append((n, lv))
    return consistent == [(rule["nutrient"], rule["level"])]


def rule_text(rule: dict) -> str:
    if rule["form"] == "presence":
        return f"grows when {rule['nutrient']} is present"
    if rule["form"] == "at_value":
        return f"grows when {rule['nutrient']} is {rule['level']}"
    return f"grows when {expr_text(rule['expr'])}"


# ---------------------------------------------------------------------------
# space sick: mold contamination signals

FOOD_POOL = [
    "mushroom skewer", "apple", "bread loaf", "cheese wheel",
    "berry pack", "dried fish", "seed cake", "melon slice",
]
MOLD_DESC = "a dense web of mold filaments"
CLEAN_DESC = "ordinary food structure, nothing unusual"
MOLD_BAND = 3
MOLD_BAND_BOOST = 2.0


def gen_contamination(rng: RngStream, difficulty: str) -> dict:
    """Food items, hidden mold flags, instrument signals, one distractor."""
    if difficulty == "easy":
        n_food, n_bad = 3, 1
    elif difficulty == "normal":
        n_food, n_bad = 5, 2
    else:
        n_food, n_bad = 6, 2
    names = rng.sample(FOOD_POOL, n_food)
    bad = set(rng.sample(range(n_food), n_bad))
    foods = []
    for i, name in enumerate(names):
        spectrum = [round(rng.uniform(0.5, 1.5), 2) for _ in range(5)]
        contaminated = i in bad
        if contaminated:
            spectrum[MOLD_BAND] = round(spectrum[MOLD_BAND] + MOLD_BAND_BOOST, 2)
        foods.append({
            "name": name,
            "contaminated": contaminated,
            "spectrum": spectrum,
            "radiationusvh": 0.0,
        })
    # distractor: one clean food shows mild radioactivity
    clean_idxs = [i for i in range(n_food) if i not in bad]
    foods[rng.choice(clean_idxs)]["radiationusvh"] = 0.3
    return {"foods": foods}


# ---------------------------------------------------------------------------
# rocket science: planet constants and measurement affordances

G_CONST = 6.674e-11
ROCKET_MASS_KG = 50000.0
KNOWN_BODIES = {
    "Earth": (5.972e24, 6.371e6),
    "Mars": (6.417e23, 3.3895e6),
    "Venus": (4.867e24, 6.0518e6),
    "the Moon": (7.342e22, 1.7374e6),
}
PROPELLANT_NAMES = ["hydrazine blend", "kerolox mix", "solid composite"]


def orbital_velocity(M: float, R: float, h: float, G: float = G_CONST) -> float:
    """Circular-orbit speed at altitude h above a planet of mass M, radius R."""
    if R + h <= 0:
        raise ValueError("NONPOSITIVE_RADIUS")
    return math.sqrt(G * M / (R + h))


def pendulum_period(length: float, g: float) -> float:
    return 2.0 * math.pi * math.sqrt(length / g)


def eratosthenes_radius(baseline_m: float, angle1_deg: float, angle2_deg: float) -> float:
    """Planet radius from two shadow angles a baseline apart."""
    dtheta = abs(angle2_deg - angle1_deg) * math.pi / 180.0
    if dtheta == 0:
        raise ValueError("equal shadow angles")
    return baseline_m / dtheta


def propellant_requirement(planet: dict, propellant: dict, target_v: float) -> dict:
    """Burn time, propellant mass and volume for one propellant type.

    Constant-thrust impulse: t = m_rocket * v / thrust, mass = flow * t,
    volume in liters = mass / density (g/cm^3 == kg/L).
    """
    if propellant["thrust_n"] <= 0 or propellant["flow_kg_s"] <= 0:
        raise ValueError("INFEASIBLE: nonpositive thrust or flow")
    t = planet["rocket_mass"] * target_v / propellant["thrust_n"]
    mass = propellant["flow_kg_s"] * t
    volume_l = mass / propellant["density"]
    return {
        "type": propellant["name"],
        "burn_s": t,
        "mass_kg": mass,
        "volume_l": volume_l,
    }


def gen_planet(rng: RngStream, difficulty: str) -> dict:
    """Planet constants plus pendulum / shadow-angle / propellant data."""
    if difficulty == "easy":
        body = rng.choice(sorted(KNOWN_BODIES))
        M, R = KNOWN_BODIES[body]
    else:
        body = None
        M = rng.uniform(1e23, 8e24)
        R = rng.uniform(2.5e6, 7e6)
    g = G_CONST * M / (R * R)
    h = rng.randint(20, 60) * 1e4
    v = orbital_velocity(M, R, h)

    pendulum_len = float(rng.randint(2, 5))
    baseline = rng.randint(30, 80) * 1e4
    angle1 = round(rng.uniform(5.0, 15.0), 4)
    angle2 = round(angle1 + baseline / R * 180.0 / math.pi, 4)

    while True:
        props = []
        for name in PROPELLANT_NAMES:
            props.append({
                "name": name,
                "density": round(rng.uniform(0.7, 1.4), 2),
                "flow_kg_s": float(rng.randint(200, 400)),
                "thrust_n": float(rng.randint(10, 30)) * 1e5,
            })
        vols = []
        for p in props:
            req = propellant_requirement(
                {"rocket_mass": ROCKET_MASS_KG}, p, v
            )
            vols.append(req["volume_l"])
        best = vols.index(min(vols))
        others = [x for i, x in enumerate(vols) if i != best]
        if min(others) > vols[best] * 1.2:
            break
    tank_cap = round(vols[best] * 1.1, 0)

    return {
        "G": G_CONST,
        "M": M,
        "R": R,
        "g": g,
        "h": h,
        "v_orbit": v,
        "body": body,
        "rocket_mass": ROCKET_MASS_KG,
        "pendulum": {"length_m": pendulum_len},
        "eratosthenes": {
            "baseline_m": baseline,
            "angle1_deg": angle1,
            "angle2_deg": angle2,
        },
        "propellants": props,
        "designated": props[best]["name"],
        "tank_cap_l": tank_cap,
    }


# ---------------------------------------------------------------------------
# translation: alien lexicon with groundings

CONSONANTS = "bdfgklmnprstvz"
VOWELS = "aeiou"
VERB_MEANINGS = ["bring", "take", "open", "eat"]
AMOUNT_MEANINGS = [1, 2, 3, 4, 5]
COLOR_MEANINGS = ["red", "blue", "green", "yellow"]
ITEM_MEANINGS = ["flower", "stone", "fruit", "shell"]


def _alien_word(rng: RngStream, taken: set) -> str:
    while True:
        n_syll = rng.randint(2, 3)
        word = "".join(
            rng.choice(CONSONANTS) + rng.choice(VOWELS) for _ in range(n_syll)
        )
        if word not in taken:
            taken.add(word)
            return word


def gen_lexicon(rng: RngStream, difficulty: str) -> dict:
    """Alien vocabulary, target utterance, and grounding plan.

    Words are globally unique (hence injective within each category); every
    token of the utterance gets at least one grounding placement.
    """
    taken: set = set()
    words = {
        "verb": {m: _alien_word(rng, taken) for m in VERB_MEANINGS},
        "amount": {str(m): _alien_word(rng, taken) for m in AMOUNT_MEANINGS},
        "color": {m: _alien_word(rng, taken) for m in COLOR_MEANINGS},
        "item": {m: _alien_word(rng, taken) for m in ITEM_MEANINGS},
    }
    gold = {
        "verb": "bring",
        "amount": rng.randint(2, 4),
        "color": rng.choice(COLOR_MEANINGS),
        "item": rng.choice(ITEM_MEANINGS),
    }
    if difficulty == "challenge":
        utterance = [
            words["verb"][gold["verb"]],
            words["amount"][str(gold["amount"])],
            words["color"][gold["color"]],
            words["item"][gold["item"]],
        ]
        tokens = [
            ("verb", gold["verb"]),
            ("amount", str(gold["amount"])),
            ("color", gold["color"]),
            ("item", gold["item"]),
        ]
    else:
        gold["amount"] = 1
        gold["color"] = None
        utterance = [words["item"][gold["item"]]]
        tokens = [("item", gold["item"])]

    groundings = []
    for category, meaning in tokens:
        groundings.append({
            "word": words[category][meaning],
            "category": category,
            "meaning": meaning,
        })
    return {
        "words": words,
        "gold": gold,
        "utterance": utterance,
        "groundings": groundings,
    }


# ---------------------------------------------------------------------------
# instrument reading semantics

INSTRUMENT_PROPS = {
    "thermometer": "temperatureC",
    "densitometer": "density",
    "radiationmeter": "radiationusvh",
    "phmeter": "ph",
    "microscope": "microscopeDesc",
    "spectrometer": "spectrum",
    "proteomicsmeter": "proteinValues",
    "radioisotopemeter": "radioisotopeValues",
    "soilprobe": "soilNutrients",
    "radiocarbonmeter": "radiocarbonAge",
}


def read_instrument(kind: str, props: dict) -> str:
    """Message text for one instrument applied to one property snapshot.

    Sentinel values (empty maps/lists, -1 ages, nonpositive densities) give
    an explicit inconclusive message rather than an error.
    """
    if kind == "thermometer":
        return f"Temperature: {props['temperatureC']:.1f} C"
    if kind == "densitometer":
        d = props["density"]
        if d <= 0:
            return INCONCLUSIVE
        return f"Density: {d:.2f} g/cm^3"
    if kind == "radiationmeter":
        return f"Radiation: {props['radiationusvh']:.2f} uSv/h"
    if kind == "phmeter":
        ph = props["ph"]
        if ph < 0:
            return INCONCLUSIVE
        return f"pH: {ph:.1f}"
    if kind == "microscope":
        desc = props["microscopeDesc"]
        extra = props.get("microscopeModifierText") or []
        if not desc and not extra:
            return INCONCLUSIVE
        text = f"Under the microscope: {desc}" if desc else "Under the microscope:"
        for line in extra:
            text += f" {line}"
        return text
    if kind == "spectrometer":
        spec = props["spectrum"]
        if not spec:
            return INCONCLUSIVE
        bands = ", ".join(f"band {i}: {v:.2f}" for i, v in enumerate(spec))
        return f"Spectrum: {bands}"
    if kind == "proteomicsmeter":
        vals = props["proteinValues"]
        if not vals:
            return INCONCLUSIVE
        return ", ".join(f"{k}: {vals[k]:.2f}" for k in sorted(vals))
    if kind == "radioisotopemeter":
        vals = props["radioisotopeValues"]
        if not vals:
            return INCONCLUSIVE
        return ", ".join(f"channel {i + 1}: {v:.3f}" for i, v in enumerate(vals))
    if kind == "soilprobe":
        soil = props["soilNutrients"]
        if not soil:
            return INCONCLUSIVE
        return "Soil nutrients: " + ", ".join(f"{k}: {soil[k]}" for k in sorted(soil))
    if kind == "radiocarbonmeter":
        age = props["radiocarbonAge"]
        if age < 0:
            return INCONCLUSIVE
        return f"Radiocarbon age: {age} years"
    raise ValueError(f"unknown instrument kind: {kind}")
