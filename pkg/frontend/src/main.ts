/** Bootstrap: create a session from the server's default model and render. */

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { render, wire } from "./dom.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app container");
}

const controller = new SessionController(new ApiClient(""));
controller.onChange = () => {
  const vm = controller.viewModel();
  if (vm) render(root, vm, controller);
};
wire(root, controller);

controller.load().catch((err) => {
  root.textContent = `failed to start a session: ${err}`;
});
