/** Snapshot feed: server-sent events with a 1 s polling fallback.
 *
 * The EventSource reconnects on its own; while it is down, the poller
 * keeps the display fresh from GET /api/status. The link is reported
 * "lost" only when neither path delivers. */

import type { LinkState, StatusSnapshot } from "./types.js";

export interface StreamHandlers {
  onSnapshot: (snapshot: StatusSnapshot) => void;
  onLink: (state: LinkState) => void;
}

export interface StreamDeps {
  EventSourceImpl?: typeof EventSource;
  fetchFn?: typeof fetch;
  pollMs?: number;
}

export function connectStatusStream(statusBase: string, handlers: StreamHandlers,
                                    deps: StreamDeps = {}): () => void {
  const ES = deps.EventSourceImpl ?? EventSource;
  const fetchFn = deps.fetchFn ?? fetch;
  const pollMs = deps.pollMs ?? 1000;

  let pollTimer: ReturnType<typeof setInterval> | null = null;
  let closed = false;
  handlers.onLink("connecting");

  const stopPolling = () => {
    if (pollTimer !== null) {
      clearInterval(pollTimer);
      pollTimer = null;
    }
  };

  const poll = async () => {
    try {
      const resp = await fetchFn(`${statusBase}/api/status`);
      if (!resp.ok) throw new Error(`status ${resp.status}`);
      handlers.onSnapshot(await resp.json() as StatusSnapshot);
      handlers.onLink("live");
    } catch {
      handlers.onLink("lost");
    }
  };

  const startPolling = () => {
    if (pollTimer === null && !closed) {
      void poll();
      pollTimer = setInterval(() => void poll(), pollMs);
    }
  };

  const es = new ES(`${statusBase}/api/stream`);
  es.onopen = () => {
    stopPolling();
    handlers.onLink("live");
  };
  es.onmessage = (event: MessageEvent) => {
    stopPolling();
    handlers.onSnapshot(JSON.parse(event.data) as StatusSnapshot);
    handlers.onLink("live");
  };
  es.onerror = () => {
    handlers.onLink("lost");
    startPolling();  // the EventSource keeps retrying in the background
  };

  return () => {
    closed = true;
    stopPolling();
    es.close();
  };
}
