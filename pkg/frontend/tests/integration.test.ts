// End-to-end review loop against a real served registry with demo data:
// load the queue, accept the review pair, watch the cluster merge; reject
// the auto pair, watch it split; conflicting same-editor verdicts are 409.

import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiError, RegistryClient } from '../src/api.js';
import { ReviewSession } from '../src/state.js';

const REPO_ROOT = fileURLToPath(new URL('../..', import.meta.url));
const PORT = 8750 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let dataDir: string;

async function waitForServer(timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/api/taxonomy?limit=1`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not come up on ${BASE}`);
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), 'review-ui-'));
  const seeded = spawnSync('python3', [join(REPO_ROOT, 'frontend', 'scripts', 'make_demo.py'), dataDir], {
    encoding: 'utf-8',
  });
  if (seeded.status !== 0) {
    throw new Error(`make_demo.py failed: ${seeded.stderr}`);
  }
  server = spawn(
    'python3',
    ['-m', 'scriptorium.cli', 'serve', '--data', dataDir, '--port', String(PORT)],
    { stdio: ['ignore', 'ignore', 'pipe'] },
  );
  await waitForServer();
}, 30000);

afterAll(() => {
  server?.kill();
  if (dataDir) rmSync(dataDir, { recursive: true, force: true });
});

describe('review loop against a live service', () => {
  const client = () => new RegistryClient(BASE);

  it('queue lists only review-band candidates under the default filter', async () => {
    const session = new ReviewSession(client());
    await session.refresh();
    const view = session.view();
    expect(view.status).toBe('ready');
    expect(view.candidates.length).toBe(1);
    const only = view.candidates[0];
    expect(only.band).toBe('review');
    expect(only.left).toBe('demo-review-1');
    expect(only.right).toBe('demo-review-2');
    // side-by-side context comes from the API
    expect(only.left_context.titles[0].text).toContain('orchards');
    expect(only.left_context.incipit?.lang).toBe('syr');
    expect(only.left_context.source_ms?.uri).toContain('/manuscript/');
  });

  it('accepting the review pair merges it in the cluster view', async () => {
    const session = new ReviewSession(client());
    await session.refresh();
    const target = session.selectedCandidate();
    expect(target).not.toBeNull();
    const ok = await session.decide('accept', 'integration-editor');
    expect(ok).toBe(true);
    const merged = session
      .view()
      .clusters.find((c) => c.members.includes('demo-review-1'));
    expect(merged?.members).toContain('demo-review-2');

    // the standing decision is visible on a fresh fetch (read-your-writes)
    const again = new ReviewSession(client());
    await again.refresh();
    expect(again.view().candidates[0].decision?.verdict).toBe('accept');
    expect(again.view().candidates[0].decision?.editor).toBe('integration-editor');
  });

  it('the auto pair merges on its own until an editor rejects it', async () => {
    const c = client();
    const before = await c.loadClusters();
    const auto = before.items.find((cl) => cl.members.includes('demo-auto-1'));
    expect(auto?.members).toEqual(['demo-auto-1', 'demo-auto-2']);

    const queue = await c.loadQueue({ band: 'auto' });
    expect(queue.items.length).toBe(1);
    await c.submitDecision(queue.items[0].candidate_id, 'reject', 'integration-editor');

    const after = await c.loadClusters();
    const left = after.items.find((cl) => cl.members.includes('demo-auto-1'));
    expect(left?.members).toEqual(['demo-auto-1']);
    const right = after.items.find((cl) => cl.members.includes('demo-auto-2'));
    expect(right?.members).toEqual(['demo-auto-2']);
  });

  it('conflicting same-editor verdict surfaces as an inline 409', async () => {
    const session = new ReviewSession(client());
    await session.refresh();
    const target = session.selectedCandidate();
    expect(target?.decision?.verdict).toBe('accept');
    const ok = await session.decide('reject', 'integration-editor');
    expect(ok).toBe(false);
    const view = session.view();
    expect(view.rowErrors.get(target!.candidate_id)).toContain('DECISION_CONFLICT');
    // the standing accepted decision is restored on the row
    expect(view.candidates[0].decision?.verdict).toBe('accept');
  });

  it('repeating the identical decision is idempotent', async () => {
    const c = client();
    const queue = await c.loadQueue({ band: 'review' });
    const ack = await c.submitDecision(queue.items[0].candidate_id, 'accept', 'integration-editor');
    expect(ack.status).toBe('unchanged');
  });

  it('unknown candidates are a 404 from the decision endpoint', async () => {
    const err = await client()
      .submitDecision('does-not-exist', 'accept', 'integration-editor')
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
  });
});
