/** Thin fetch client for the session endpoints. */

import type { ApiErrorBody, SessionDocument } from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.detail || body.error);
    this.status = status;
    this.code = body.error;
  }
}

export class ApiClient {
  private readonly base: string;

  constructor(base = "") {
    this.base = base.replace(/\/$/, "");
  }

  private async request(
    method: string,
    path: string,
    body?: unknown
  ): Promise<SessionDocument> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload as ApiErrorBody);
    }
    return payload as SessionDocument;
  }

  /** POST /sessions; omit the model to use the server's default. */
  createSession(model?: string, name?: string): Promise<SessionDocument> {
    const body: Record<string, string> = {};
    if (model !== undefined) body.model = model;
    if (name !== undefined) body.name = name;
    return this.request("POST", "/sessions", body);
  }

  getState(id: string): Promise<SessionDocument> {
    return this.request("GET", `/sessions/${id}`);
  }

  decide(id: string, variable: string, value: boolean): Promise<SessionDocument> {
    return this.request("POST", `/sessions/${id}/decisions`, {
      var: variable,
      value,
    });
  }

  undo(id: string, variable: string): Promise<SessionDocument> {
    return this.request("DELETE", `/sessions/${id}/decisions/${variable}`);
  }

  shopping(id: string): Promise<SessionDocument> {
    return this.request("POST", `/sessions/${id}/shopping-principle`);
  }

  blindComplete(id: string): Promise<SessionDocument> {
    return this.request("POST", `/sessions/${id}/complete`);
  }
}
