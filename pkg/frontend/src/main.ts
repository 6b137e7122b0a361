import { mountApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("no #app element to mount into");
mountApp(root);
