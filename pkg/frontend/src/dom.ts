/** Thin DOM layer: render a view model, delegate clicks to the controller. */

import type { SessionController } from "./controller.js";
import type { FeatureRow, ViewModel } from "./viewmodel.js";

function rowElement(row: FeatureRow, error: string | null): HTMLElement {
  const line = document.createElement("div");
  line.className = "feature-row";
  line.style.paddingLeft = `${row.depth * 1.4}rem`;
  if (row.highlighted) line.classList.add("needs-attention");
  if (row.selected === true) line.classList.add("is-selected");
  if (row.selected === false) line.classList.add("is-deselected");

  const label = document.createElement("span");
  label.className = "feature-name";
  label.textContent = row.name;
  if (row.groupKind) {
    label.title = `${row.groupKind}-group member`;
    label.textContent = `${row.name}`;
    label.dataset.group = row.groupKind;
  } else if (row.kind !== "root") {
    label.title = row.kind;
  }
  line.appendChild(label);

  const controls = document.createElement("span");
  controls.className = "controls";
  const mk = (action: string, text: string, enabled: boolean, active: boolean) => {
    const btn = document.createElement("button");
    btn.textContent = text;
    btn.dataset.action = action;
    btn.dataset.variable = row.name;
    btn.disabled = !enabled;
    if (active) btn.classList.add("active");
    controls.appendChild(btn);
  };
  mk("select", "select", row.canSelect, row.selected === true);
  mk("deselect", "deselect", row.canDeselect, row.selected === false);
  if (row.canUndo) mk("undo", "undo", true, false);
  line.appendChild(controls);

  if (row.badge) {
    const badge = document.createElement("span");
    badge.className = `badge badge-${row.badge}`;
    badge.textContent = row.badge;
    line.appendChild(badge);
  }
  if (row.highlighted) {
    const mark = document.createElement("span");
    mark.className = "attention-mark";
    mark.textContent = "needs attention";
    line.appendChild(mark);
  }
  if (error) {
    const note = document.createElement("span");
    note.className = "inline-error";
    note.textContent = error;
    line.appendChild(note);
  }
  return line;
}

export function render(
  root: HTMLElement,
  vm: ViewModel,
  controller: SessionController
): void {
  root.textContent = "";

  const heading = document.createElement("h1");
  heading.textContent = `configuring ${vm.modelName}`;
  root.appendChild(heading);

  const tree = document.createElement("div");
  tree.className = "tree";
  const errorFor = controller.state.lastError;
  for (const row of vm.rows) {
    const inline =
      errorFor && errorFor.variable === row.name ? errorFor.message : null;
    tree.appendChild(rowElement(row, inline));
  }
  root.appendChild(tree);

  const actions = document.createElement("div");
  actions.className = "finish-actions";
  const safely = document.createElement("button");
  safely.textContent = "Finish safely";
  safely.className = "finish-safely";
  safely.dataset.action = "finish-safely";
  safely.disabled = controller.state.pending;
  const blind = document.createElement("button");
  blind.textContent = "Finish (any)";
  blind.className = "finish-blind";
  blind.dataset.action = "finish-blind";
  blind.disabled = controller.state.pending;
  actions.appendChild(safely);
  actions.appendChild(blind);
  root.appendChild(actions);

  if (vm.banner) {
    const banner = document.createElement("div");
    banner.className = "completion-banner";
    banner.textContent = `configuration complete: ${vm.banner}`;
    root.appendChild(banner);
  }
  if (errorFor && errorFor.variable === null) {
    const toast = document.createElement("div");
    toast.className = "toast";
    toast.textContent = errorFor.message;
    root.appendChild(toast);
  }
}

export function wire(root: HTMLElement, controller: SessionController): void {
  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset?.action;
    if (!action || (target as HTMLButtonElement).disabled) return;
    const variable = target.dataset.variable;
    if (action === "select" && variable) void controller.select(variable);
    else if (action === "deselect" && variable) void controller.deselect(variable);
    else if (action === "undo" && variable) void controller.undo(variable);
    else if (action === "finish-safely") void controller.finishSafely();
    else if (action === "finish-blind") void controller.finishBlind();
  });
}
