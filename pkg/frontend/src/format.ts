// Display formatting only. Nothing here changes a value's meaning; raw
// numbers stay available in the view models for anyone who needs them.

export function formatMicros(us: number): string {
  if (us >= 1_000_000) return `${(us / 1_000_000).toFixed(2)}s`;
  if (us >= 1_000) return `${(us / 1_000).toFixed(2)}ms`;
  return `${us}µs`;
}

export function formatSupport(fraction: number): string {
  return `${(fraction * 100).toFixed(1)}%`;
}

export function formatP(p: number): string {
  if (p === 0) return "0";
  if (p < 1e-4) return p.toExponential(1);
  return p.toFixed(4);
}
