// Thin fetch client for the recorder service. The fetch function is
// injectable so tests can stub the network.

import {
  Annotation,
  AnnotationIn,
  FindingsDoc,
  LogSlice,
  Meta,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function errorDetail(res: Response): Promise<string> {
  try {
    const body = await res.json();
    return typeof body.detail === "string"
      ? body.detail
      : JSON.stringify(body.detail ?? body);
  } catch {
    return res.statusText || "request failed";
  }
}

export class ApiClient {
  constructor(
    public base: string,
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {
    this.base = base.replace(/\/+$/, "");
  }

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchFn(`${this.base}${path}`);
    if (!res.ok) throw new ApiError(res.status, await errorDetail(res));
    return (await res.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/api/meta");
  }

  log(from: number, to: number): Promise<LogSlice> {
    return this.get<LogSlice>(`/api/log?from=${from}&to=${to}`);
  }

  findings(): Promise<FindingsDoc> {
    return this.get<FindingsDoc>("/api/findings");
  }

  annotations(): Promise<Annotation[]> {
    return this.get<Annotation[]>("/api/annotations");
  }

  async postAnnotation(a: AnnotationIn): Promise<Annotation> {
    const res = await this.fetchFn(`${this.base}/api/annotations`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(a),
    });
    if (!res.ok) throw new ApiError(res.status, await errorDetail(res));
    return (await res.json()) as Annotation;
  }
}
