import { ApiClient } from "./api.js";
import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(window.location.origin, params.get("method") ?? "sliding");
const app = new App(
  document.getElementById("app")!,
  api,
  params.get("r") ? Number(params.get("r")) : undefined,
);
void app.init().then(() => app.loadSuggestions());
