/** Thin fetch client for the session endpoints. */
export class ApiError extends Error {
    constructor(status, body) {
        super(body.detail || body.error);
        this.status = status;
        this.code = body.error;
    }
}
export class ApiClient {
    constructor(base = "") {
        this.base = base.replace(/\/$/, "");
    }
    async request(method, path, body) {
        const response = await fetch(this.base + path, {
            method,
            headers: body === undefined ? {} : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const payload = await response.json();
        if (!response.ok) {
            throw new ApiError(response.status, payload);
        }
        return payload;
    }
    /** POST /sessions; omit the model to use the server's default. */
    createSession(model, name) {
        const body = {};
        if (model !== undefined)
            body.model = model;
        if (name !== undefined)
            body.name = name;
        return this.request("POST", "/sessions", body);
    }
    getState(id) {
        return this.request("GET", `/sessions/${id}`);
    }
    decide(id, variable, value) {
        return this.request("POST", `/sessions/${id}/decisions`, {
            var: variable,
            value,
        });
    }
    undo(id, variable) {
        return this.request("DELETE", `/sessions/${id}/decisions/${variable}`);
    }
    shopping(id) {
        return this.request("POST", `/sessions/${id}/shopping-principle`);
    }
    blindComplete(id) {
        return this.request("POST", `/sessions/${id}/complete`);
    }
}
