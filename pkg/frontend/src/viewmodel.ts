/** Pure projection of a session document onto what the tree view renders.
 *
 * The rendered tree is a function of the document alone; no constraint
 * logic lives on the client.  Rows follow the feature tree in depth-first
 * order so the view can indent by depth.
 */

import type { SessionDocument, TreeNode, VariableDocument, VariableStatus } from "./types.js";

export interface FeatureRow {
  name: string;
  depth: number;
  /** Edge kind in the tree: root, mandatory, optional, or group member. */
  kind: TreeNode["kind"];
  /** xor / or when the feature is a group member. */
  groupKind: "xor" | "or" | null;
  status: VariableStatus;
  /** true = in the product, false = excluded, null = still open. */
  selected: boolean | null;
  /** Origin badge shown on decided features ("inferred", "auto", "user"). */
  badge: string | null;
  /** Needs-attention marker from the latest safe completion. */
  highlighted: boolean;
  /** Whether the select / deselect / undo controls may issue requests. */
  canSelect: boolean;
  canDeselect: boolean;
  canUndo: boolean;
}

export interface ViewModel {
  modelName: string;
  rows: FeatureRow[];
  complete: boolean;
  /** Final feature combination, present once the session is complete. */
  banner: string | null;
}

const SELECTED: Record<VariableStatus, boolean | null> = {
  unassigned: null,
  user_true: true,
  user_false: false,
  inferred_true: true,
  inferred_false: false,
  auto_false: false,
};

const BADGE: Record<VariableStatus, string | null> = {
  unassigned: null,
  user_true: "user",
  user_false: "user",
  inferred_true: "inferred",
  inferred_false: "inferred",
  auto_false: "auto",
};

export function buildViewModel(doc: SessionDocument): ViewModel {
  const byName = new Map<string, VariableDocument>();
  for (const variable of doc.variables) {
    byName.set(variable.name, variable);
  }
  const rows: FeatureRow[] = [];

  const walk = (node: TreeNode, depth: number): void => {
    const variable = byName.get(node.name);
    if (!variable) {
      throw new Error(`tree node ${node.name} missing from variables`);
    }
    rows.push({
      name: node.name,
      depth,
      kind: node.kind,
      groupKind: node.group ? node.group.kind : null,
      status: variable.status,
      selected: SELECTED[variable.status],
      badge: BADGE[variable.status],
      highlighted: variable.highlighted,
      canSelect: variable.status === "unassigned" && variable.selectable_true,
      canDeselect: variable.status === "unassigned" && variable.selectable_false,
      canUndo: variable.status === "user_true" || variable.status === "user_false",
    });
    for (const child of node.children) {
      walk(child, depth + 1);
    }
  };
  walk(doc.tree, 0);

  const banner = doc.complete
    ? "{" +
      doc.variables
        .filter((v) => SELECTED[v.status] === true)
        .map((v) => v.name)
        .join(", ") +
      "}"
    : null;

  return {
    modelName: doc.model_name,
    rows,
    complete: doc.complete,
    banner,
  };
}
