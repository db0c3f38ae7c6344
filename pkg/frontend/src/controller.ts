/** Client-side session state and the action handlers behind the controls.
 *
 * One mutation is in flight at a time; clicks arriving while pending are
 * ignored.  Every successful response replaces the whole session document
 * (no optimistic updates), and controls disabled in the view model never
 * reach the network.
 */

import { ApiClient, ApiError } from "./api.js";
import type { SessionDocument } from "./types.js";
import { buildViewModel, type ViewModel } from "./viewmodel.js";

export interface UserAction {
  kind: "select" | "deselect" | "undo" | "finish-safely" | "finish-blind";
  variable?: string;
}

export interface ViewState {
  session: SessionDocument | null;
  pending: boolean;
  history: UserAction[];
  /** Inline explanation for the control a rejected request came from. */
  lastError: { variable: string | null; message: string } | null;
}

export class SessionController {
  private readonly api: ApiClient;
  readonly state: ViewState = {
    session: null,
    pending: false,
    history: [],
    lastError: null,
  };
  onChange: (() => void) | null = null;

  constructor(api: ApiClient) {
    this.api = api;
  }

  viewModel(): ViewModel | null {
    return this.state.session ? buildViewModel(this.state.session) : null;
  }

  private notify(): void {
    if (this.onChange) this.onChange();
  }

  async load(model?: string, name?: string): Promise<void> {
    this.state.session = await this.api.createSession(model, name);
    this.state.history = [];
    this.state.lastError = null;
    this.notify();
  }

  /** Run one mutation; returns false when the click was ignored or rejected. */
  private async mutate(
    action: UserAction,
    call: (id: string) => Promise<SessionDocument>
  ): Promise<boolean> {
    const session = this.state.session;
    if (!session || this.state.pending) {
      return false;
    }
    this.state.pending = true;
    this.state.lastError = null;
    this.notify();
    try {
      this.state.session = await call(session.id);
      this.state.history.push(action);
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.state.lastError = {
          variable: action.variable ?? null,
          message: err.message,
        };
        return false;
      }
      throw err;
    } finally {
      this.state.pending = false;
      this.notify();
    }
  }

  /** Select / deselect issue nothing when the control is not selectable. */
  select(variable: string): Promise<boolean> {
    const row = this.viewModel()?.rows.find((r) => r.name === variable);
    if (!row || !row.canSelect) return Promise.resolve(false);
    return this.mutate({ kind: "select", variable }, (id) =>
      this.api.decide(id, variable, true)
    );
  }

  deselect(variable: string): Promise<boolean> {
    const row = this.viewModel()?.rows.find((r) => r.name === variable);
    if (!row || !row.canDeselect) return Promise.resolve(false);
    return this.mutate({ kind: "deselect", variable }, (id) =>
      this.api.decide(id, variable, false)
    );
  }

  undo(variable: string): Promise<boolean> {
    const row = this.viewModel()?.rows.find((r) => r.name === variable);
    if (!row || !row.canUndo) return Promise.resolve(false);
    return this.mutate({ kind: "undo", variable }, (id) =>
      this.api.undo(id, variable)
    );
  }

  /** Scenario A+: auto-deselect what is safe, highlight the rest. */
  finishSafely(): Promise<boolean> {
    return this.mutate({ kind: "finish-safely" }, (id) => this.api.shopping(id));
  }

  /** Scenario A: bind everything to some model. */
  finishBlind(): Promise<boolean> {
    return this.mutate({ kind: "finish-blind" }, (id) =>
      this.api.blindComplete(id)
    );
  }
}
