/** Freehand stroke capture from pointer trajectories. DOM-free: the
 * page wiring feeds it pointer positions in canvas coordinates, tests
 * feed it scripted traces. */

import type { Point } from "./types.js";

export interface PointerLike {
  x: number;
  y: number;
}

export class StrokeCapture {
  private current: Point[] | null = null;

  constructor(
    private readonly canvasW: number,
    private readonly canvasH: number,
    private readonly onStroke: (stroke: Point[]) => void,
    private readonly onPenUp: () => void,
  ) {}

  get drawing(): boolean {
    return this.current !== null;
  }

  get livePoints(): readonly Point[] {
    return this.current ?? [];
  }

  private clamp(p: PointerLike): Point {
    const x = Math.min(this.canvasW - 1, Math.max(0, Math.round(p.x)));
    const y = Math.min(this.canvasH - 1, Math.max(0, Math.round(p.y)));
    return [x, y];
  }

  down(p: PointerLike): void {
    this.current = [this.clamp(p)];
  }

  move(p: PointerLike): void {
    if (this.current === null) return;
    const [x, y] = this.clamp(p);
    const last = this.current[this.current.length - 1];
    if (last[0] === x && last[1] === y) return;
    this.current.push([x, y]);
  }

  up(): void {
    if (this.current === null) return;
    const stroke = this.current;
    this.current = null;
    this.onStroke(stroke);
    this.onPenUp();
  }
}

/** Replay a scripted trace through the capture, as the tests and demo do. */
export function tracePath(capture: StrokeCapture, points: PointerLike[]): void {
  if (points.length === 0) return;
  capture.down(points[0]);
  for (const p of points.slice(1)) capture.move(p);
  capture.up();
}

export function circleTrace(cx: number, cy: number, radius: number, steps = 48): PointerLike[] {
  const out: PointerLike[] = [];
  for (let i = 0; i <= steps; i++) {
    const angle = (2 * Math.PI * i) / steps;
    out.push({ x: cx + radius * Math.cos(angle), y: cy + radius * Math.sin(angle) });
  }
  return out;
}
