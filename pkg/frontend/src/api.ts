// Thin fetch client for the /v1 session routes. Every helper either
// resolves with the decoded payload or throws ApiError carrying the HTTP
// status and the server's error body.

import type {
  AccuracyReportJson,
  ApiErrorBody,
  ChoiceResponse,
  CreateResponse,
  DomainJson,
  EditKind,
  EditResponse,
  EventJson,
  SessionState,
  StepResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${status}: ${body.error}`);
  }
}

async function decode<T>(resp: Response): Promise<T> {
  const body = (await resp.json()) as T & ApiErrorBody;
  if (!resp.ok) {
    throw new ApiError(resp.status, body);
  }
  return body;
}

export class Client {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}/v1/sessions${path}`;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
    return decode<T>(resp);
  }

  createSession(
    source: string,
    budgets?: { stepBudget?: number; depthBudget?: number },
  ): Promise<CreateResponse> {
    return this.post<CreateResponse>("", { source, ...budgets });
  }

  async getState(id: string): Promise<SessionState> {
    const resp = await fetch(this.url(`/${id}`));
    return decode<SessionState>(resp);
  }

  step(id: string): Promise<StepResponse> {
    return this.post<StepResponse>(`/${id}/step`);
  }

  answerOracle(id: string, answer: boolean): Promise<StepResponse> {
    return this.post<StepResponse>(`/${id}/oracle`, { answer });
  }

  edit(id: string, kind: EditKind, text: string): Promise<EditResponse> {
    return this.post<EditResponse>(`/${id}/edit`, { kind, text });
  }

  choose(id: string, branch: number): Promise<ChoiceResponse> {
    return this.post<ChoiceResponse>(`/${id}/choice`, { branch });
  }

  runAccuracy(
    id: string,
    domain: DomainJson,
    earlyExit = false,
  ): Promise<AccuracyReportJson> {
    return this.post<AccuracyReportJson>(`/${id}/accuracy`, {
      domain,
      earlyExit,
    });
  }

  async getLog(id: string): Promise<EventJson[]> {
    const resp = await fetch(this.url(`/${id}/log`));
    const body = await decode<{ events: EventJson[] }>(resp);
    return body.events;
  }
}
