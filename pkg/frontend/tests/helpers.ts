/** Boots the real stepping service for scenario tests. */

import { type ChildProcess, spawn } from 'node:child_process';

export interface LiveService {
  base: string;
  stop: () => void;
}

export async function startService(): Promise<LiveService> {
  const port = 20000 + Math.floor(Math.random() * 20000);
  const base = `http://127.0.0.1:${port}`;
  const child: ChildProcess = spawn(
    'foldbox',
    ['serve', '--host', '127.0.0.1', '--port', String(port)],
    { stdio: ['ignore', 'ignore', 'pipe'] },
  );
  let stderr = '';
  child.stderr?.on('data', (chunk) => {
    stderr += String(chunk);
  });

  const deadline = Date.now() + 15000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early (code ${child.exitCode}): ${stderr}`);
    }
    try {
      const res = await fetch(`${base}/openapi.json`);
      if (res.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error(`service did not come up on ${base}: ${stderr}`);
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  return { base, stop: () => child.kill() };
}
