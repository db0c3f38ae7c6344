/** Wire types for the session service; field names match the server exactly. */

export type VariableStatus =
  | "unassigned"
  | "user_true"
  | "user_false"
  | "inferred_true"
  | "inferred_false"
  | "auto_false";

export interface VariableDocument {
  name: string;
  status: VariableStatus;
  highlighted: boolean;
  selectable_true: boolean;
  selectable_false: boolean;
}

export interface GroupRef {
  index: number;
  kind: "xor" | "or";
}

export interface TreeNode {
  name: string;
  kind: "root" | "mandatory" | "optional" | "member";
  group: GroupRef | null;
  children: TreeNode[];
}

export interface SessionDocument {
  id: string;
  model_name: string;
  variables: VariableDocument[];
  complete: boolean;
  tree: TreeNode;
}

export interface ApiErrorBody {
  error: string;
  detail: string;
}
