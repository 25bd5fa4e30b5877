import { describe, expect, it } from 'vitest';

import { ApiError, RegistryClient } from '../src/api.js';

function fakeFetch(status: number, body: unknown, capture?: { url?: string; init?: RequestInit }) {
  return (url: string, init?: RequestInit) => {
    if (capture) {
      capture.url = url;
      capture.init = init;
    }
    return Promise.resolve(
      new Response(JSON.stringify(body), {
        status,
        headers: { 'content-type': 'application/json' },
      }),
    );
  };
}

const emptyPage = { total: 0, limit: 50, offset: 0, items: [] };

describe('RegistryClient', () => {
  it('builds queue query strings from filters, skipping unset ones', async () => {
    const capture: { url?: string } = {};
    const client = new RegistryClient('http://api.test', fakeFetch(200, emptyPage, capture));
    await client.loadQueue({ band: 'review', minScore: 0.5, limit: 10, offset: 20 });
    expect(capture.url).toBe(
      'http://api.test/api/review/queue?band=review&min_score=0.5&limit=10&offset=20',
    );
    await client.loadQueue({});
    expect(capture.url).toBe('http://api.test/api/review/queue');
  });

  it('posts decisions as JSON', async () => {
    const capture: { url?: string; init?: RequestInit } = {};
    const ack = { status: 'recorded', candidate_id: 'c1', verdict: 'accept', editor: 'ed' };
    const client = new RegistryClient('http://api.test', fakeFetch(200, ack, capture));
    const response = await client.submitDecision('c1', 'accept', 'ed');
    expect(response.status).toBe('recorded');
    expect(capture.init?.method).toBe('POST');
    expect(JSON.parse(String(capture.init?.body))).toEqual({
      candidate_id: 'c1',
      verdict: 'accept',
      editor: 'ed',
    });
  });

  it('maps server {code, message} errors to ApiError', async () => {
    const client = new RegistryClient(
      'http://api.test',
      fakeFetch(409, { code: 'DECISION_CONFLICT', message: 'already ruled' }),
    );
    const err = await client.submitDecision('c1', 'reject', 'ed').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe('DECISION_CONFLICT');
    expect(err.message).toBe('already ruled');
  });

  it('keeps the status line when the error body is not JSON', async () => {
    const fetchImpl = () =>
      Promise.resolve(new Response('<html>boom</html>', { status: 502, statusText: 'Bad Gateway' }));
    const client = new RegistryClient('http://api.test', fetchImpl);
    const err = await client.loadClusters().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe('HTTP_ERROR');
    expect(err.message).toContain('502');
  });
});
