/** Typed client for the retrieval service HTTP/JSON API. */

export interface Particle {
  id: string;
  level: "root" | "country" | "city" | "image";
  x: number;
  y: number;
  payload: string;
}

export interface Frame {
  step: number;
  particles: Particle[];
  draw_order: string[];
}

export interface GeoCountry {
  images: string[];
  cities: Record<string, string[]>;
}

export interface QueryResult {
  bmu: { node: number; distance: number };
  clusters: { node: number; distance: number; images: string[] }[];
  images: { id: string; distance: number }[];
  draw_order: string[];
  geo: Record<string, GeoCountry>;
}

export interface QueryResponse {
  session_id: string;
  result: QueryResult;
  frame: Frame;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  query(image: Blob, filename = "query.png"): Promise<QueryResponse> {
    const form = new FormData();
    form.append("image", image, filename);
    return this.request<QueryResponse>("/query", { method: "POST", body: form });
  }

  step(sessionId: string, n = 2): Promise<Frame> {
    return this.request<Frame>(`/session/${sessionId}/step?n=${n}`, { method: "POST" });
  }

  frame(sessionId: string): Promise<Frame> {
    return this.request<Frame>(`/session/${sessionId}/frame`);
  }

  pin(sessionId: string, particle: string, x: number, y: number): Promise<Frame> {
    return this.request<Frame>(`/session/${sessionId}/pin`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ particle, x, y }),
    });
  }

  release(sessionId: string, particle: string): Promise<Frame> {
    return this.request<Frame>(`/session/${sessionId}/release`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ particle }),
    });
  }

  thumbUrl(imageId: string): string {
    return `${this.baseUrl}/thumb/${encodeURIComponent(imageId)}`;
  }
}
