import assert from "node:assert/strict";
import { test } from "node:test";

import { buildViewModel } from "../src/viewmodel.js";
import type { SessionDocument } from "../src/types.js";

function doc(): SessionDocument {
  return {
    id: "abc",
    model_name: "demo",
    variables: [
      { name: "x", status: "inferred_true", highlighted: false, selectable_true: false, selectable_false: false },
      { name: "y", status: "unassigned", highlighted: true, selectable_true: true, selectable_false: true },
      { name: "a", status: "user_true", highlighted: false, selectable_true: false, selectable_false: false },
      { name: "b", status: "auto_false", highlighted: false, selectable_true: false, selectable_false: false },
    ],
    complete: false,
    tree: {
      name: "x",
      kind: "root",
      group: null,
      children: [
        { name: "y", kind: "mandatory", group: null, children: [
          { name: "a", kind: "member", group: { index: 0, kind: "xor" }, children: [] },
          { name: "b", kind: "member", group: { index: 0, kind: "xor" }, children: [] },
        ]},
      ],
    },
  };
}

test("rows follow the tree depth-first with depths", () => {
  const vm = buildViewModel(doc());
  assert.deepEqual(vm.rows.map((r) => [r.name, r.depth]), [
    ["x", 0],
    ["y", 1],
    ["a", 2],
    ["b", 2],
  ]);
  assert.equal(vm.rows[2].groupKind, "xor");
});

test("statuses map to selection, badges, and control enablement", () => {
  const vm = buildViewModel(doc());
  const byName = new Map(vm.rows.map((r) => [r.name, r]));

  const x = byName.get("x")!;
  assert.equal(x.selected, true);
  assert.equal(x.badge, "inferred");
  assert.equal(x.canSelect, false);
  assert.equal(x.canDeselect, false);
  assert.equal(x.canUndo, false);

  const y = byName.get("y")!;
  assert.equal(y.selected, null);
  assert.equal(y.highlighted, true);
  assert.equal(y.canSelect, true);
  assert.equal(y.canDeselect, true);

  const a = byName.get("a")!;
  assert.equal(a.badge, "user");
  assert.equal(a.canUndo, true);

  const b = byName.get("b")!;
  assert.equal(b.selected, false);
  assert.equal(b.badge, "auto");
});

test("completion banner lists the selected features", () => {
  const complete = doc();
  complete.complete = true;
  complete.variables[1].status = "user_false";
  complete.variables[1].highlighted = false;
  const vm = buildViewModel(complete);
  assert.equal(vm.complete, true);
  assert.equal(vm.banner, "{x, a}");
});

test("no banner while incomplete", () => {
  const vm = buildViewModel(doc());
  assert.equal(vm.banner, null);
});
