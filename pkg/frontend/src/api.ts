/** Typed client for the local privacy gateway endpoints. */

export interface MapEntry {
  plaintext: string;
  ciphertext: string;
  type: string;
}

export interface TurnRecord {
  original_in: string;
  sanitized_in: string;
  raw_out: string;
  restored_out: string;
  conflicts_fixed: number;
  turn_index: number;
}

export interface ChatReply {
  content: string;
  turnIndex: number;
}

export class GatewayError extends Error {
  constructor(message: string, public readonly status?: number) {
    super(message);
    this.name = "GatewayError";
  }
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = (await response.json()) as { detail?: unknown };
      if (body.detail) detail = `${response.status}: ${JSON.stringify(body.detail)}`;
    } catch {
      // non-JSON error body; the status code is all we have
    }
    throw new GatewayError(`gateway request failed (${detail})`, response.status);
  }
  return response;
}

export class GatewayClient {
  constructor(private readonly baseUrl: string) {}

  async createSession(types: string[]): Promise<string> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/ppts/sessions`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ types }),
      }),
    );
    const body = (await response.json()) as { id: string };
    return body.id;
  }

  async chat(sessionId: string, content: string): Promise<ChatReply> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/v1/chat/completions`, {
        method: "POST",
        headers: {
          "Content-Type": "application/json",
          "X-PPTS-Session": sessionId,
        },
        body: JSON.stringify({ messages: [{ role: "user", content }] }),
      }),
    );
    const body = (await response.json()) as {
      choices: { message: { content: string } }[];
      ppts?: { turn_index: number };
    };
    const choice = body.choices[0];
    if (!choice) throw new GatewayError("gateway reply carried no choices");
    return { content: choice.message.content, turnIndex: body.ppts?.turn_index ?? -1 };
  }

  async mapping(sessionId: string): Promise<MapEntry[]> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/ppts/sessions/${sessionId}/mapping`),
    );
    const body = (await response.json()) as { entries: MapEntry[] };
    return body.entries;
  }

  async audit(sessionId: string): Promise<TurnRecord[]> {
    const response = await expectOk(
      await fetch(`${this.baseUrl}/ppts/sessions/${sessionId}/audit`),
    );
    const body = (await response.json()) as { turns: TurnRecord[] };
    return body.turns;
  }

  /** Readiness probe so the setup view can show a blocking banner with retry. */
  async reachable(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/openapi.json`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
