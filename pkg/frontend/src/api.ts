/** Typed client for the local tap-phrase service. */

import type { WireEvent } from "./capture.js";

export interface MatcherParams {
  bins?: number;
  tau?: number;
  spanTolerance?: number;
  minSegmentMs?: number;
}

export interface EnrollResponse {
  id: string;
  tapCount: number;
  spanMs: number;
}

export interface VerifyResponse {
  accepted: boolean;
  distance?: number;
  gates: { span: boolean; count?: boolean };
}

export interface PushResponse {
  accepted: boolean;
  matchedWindow?: [number, number];
}

/** Error body surfaced verbatim: `code` is the service's error name. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

type FetchLike = (url: string, init?: any) => Promise<{
  status: number;
  json(): Promise<any>;
}>;

export class ServiceClient {
  constructor(
    public baseUrl = "http://127.0.0.1:8475",
    private fetchFn: FetchLike = (...args) => fetch(...(args as [any, any])),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<any> {
    const init: any = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const res = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (res.status === 204) return undefined;
    const payload = await res.json();
    if (res.status >= 400) {
      throw new ApiError(res.status, payload.error ?? "UnknownError", payload.detail ?? "");
    }
    return payload;
  }

  async health(): Promise<boolean> {
    try {
      const body = await this.request("GET", "/api/health");
      return body?.ok === true;
    } catch {
      return false;
    }
  }

  enroll(events: WireEvent[], params?: MatcherParams): Promise<EnrollResponse> {
    const body: any = { events };
    if (params) body.params = params;
    return this.request("POST", "/api/templates", body);
  }

  verify(
    templateId: string,
    events: WireEvent[],
    matcher: "crude" | "hamming" = "hamming",
  ): Promise<VerifyResponse> {
    return this.request("POST", `/api/templates/${templateId}/verify`, { events, matcher });
  }

  async createSession(templateId: string): Promise<string> {
    const body = await this.request("POST", `/api/templates/${templateId}/sessions`);
    return body.sessionId;
  }

  pushEvent(sessionId: string, ev: WireEvent): Promise<PushResponse> {
    return this.request("POST", `/api/sessions/${sessionId}/events`, ev);
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request("DELETE", `/api/sessions/${sessionId}`);
  }

  listTemplates(): Promise<Array<{ id: string; tapCount: number; spanMs: number }>> {
    return this.request("GET", "/api/templates");
  }
}
