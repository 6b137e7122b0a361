/* Notes pad: free text kept per session token, autosaved to
 * localStorage on every keystroke so a page refresh + resume restores
 * the draft. The submit path sends the text as the bye notes.
 */

const STORAGE_PREFIX = "sciquest-notes:";

export class NotesPad {
  private token: string | null = null;

  constructor(private textarea: HTMLTextAreaElement) {
    textarea.addEventListener("input", () => this.save());
  }

  /** Attach the pad to a session; restores any saved draft for it. */
  bind(token: string): void {
    this.token = token;
    const saved = localStorage.getItem(STORAGE_PREFIX + token);
    this.textarea.value = saved ?? "";
  }

  get value(): string {
    return this.textarea.value;
  }

  private save(): void {
    if (this.token === null) return;
    localStorage.setItem(STORAGE_PREFIX + this.token, this.textarea.value);
  }
}
