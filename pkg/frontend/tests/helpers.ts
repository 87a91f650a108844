/** Shared test plumbing: a routable fake fetch and a JSON response builder. */

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

export type RouteHandler = (init?: RequestInit) => Response | Promise<Response>;

/**
 * Fake fetch keyed on "METHOD path" (path includes the query string).
 * Unrouted requests reject like a dead connection would.
 */
export class FakeRoutes {
  readonly calls: string[] = [];
  private readonly handlers = new Map<string, RouteHandler>();

  on(method: string, path: string, handler: RouteHandler): this {
    this.handlers.set(`${method} ${path}`, handler);
    return this;
  }

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input);
    const key = `${init?.method ?? 'GET'} ${url.pathname}${url.search}`;
    this.calls.push(key);
    const handler = this.handlers.get(key);
    if (!handler) throw new TypeError(`fetch failed: no route for ${key}`);
    return handler(init);
  };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
