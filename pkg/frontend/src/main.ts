import { mountApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const apiBase = (params.get("api") ?? "http://127.0.0.1:8000").replace(/\/$/, "");

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
mountApp(root, apiBase);
