/** Layered SVG rendering of a history diagram.
 *
 * A pure function of the service's diagram JSON: boxes are placed on
 * layers by longest path from the inputs, wires are cubic curves from
 * producer port to consumer port. Deterministic output, so snapshots
 * are stable.
 */

import type { DiagramJson, DiagramLink } from './types.js';

const LAYER_W = 130;
const ROW_H = 46;
const BOX_W = 72;
const BOX_H = 30;
const PAD = 24;

interface Point {
  x: number;
  y: number;
}

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function boxLayers(diag: DiagramJson): number[] {
  const layers: number[] = new Array(diag.boxes.length).fill(1);
  // boxes arrive in construction order, so inputs refer to earlier boxes
  diag.boxes.forEach((box, i) => {
    for (const link of box.inputs) {
      if (link.kind === 'box') {
        layers[i] = Math.max(layers[i], layers[link.box] + 1);
      }
    }
  });
  return layers;
}

export function renderDiagram(diag: DiagramJson): string {
  const layers = boxLayers(diag);
  const lastLayer = Math.max(1, ...layers) + 1;

  // vertical slots per layer, in box construction order
  const slotOf: number[] = new Array(diag.boxes.length).fill(0);
  const used: Record<number, number> = {};
  layers.forEach((layer, i) => {
    slotOf[i] = used[layer] ?? 0;
    used[layer] = slotOf[i] + 1;
  });

  const inputPos = (index: number): Point => ({
    x: PAD,
    y: PAD + index * ROW_H + BOX_H / 2,
  });
  const boxPos = (i: number): Point => ({
    x: PAD + layers[i] * LAYER_W,
    y: PAD + slotOf[i] * ROW_H,
  });
  const outPortPos = (link: DiagramLink): Point => {
    if (link.kind === 'input') return inputPos(link.index);
    const p = boxPos(link.box);
    return { x: p.x + BOX_W, y: p.y + BOX_H / 2 + link.port * 8 };
  };

  const wires: string[] = [];
  const wire = (from: Point, to: Point) => {
    const mx = (from.x + to.x) / 2;
    wires.push(
      `<path class="wire" d="M ${from.x} ${from.y} C ${mx} ${from.y}, ` +
        `${mx} ${to.y}, ${to.x} ${to.y}"/>`,
    );
  };

  const nodes: string[] = [];
  diag.dom.forEach((obj, i) => {
    const p = inputPos(i);
    nodes.push(
      `<circle class="port in" cx="${p.x}" cy="${p.y}" r="4"/>` +
        `<text class="port-label" x="${p.x - 8}" y="${p.y + 4}" ` +
        `text-anchor="end">${obj}</text>`,
    );
  });
  diag.boxes.forEach((box, i) => {
    const p = boxPos(i);
    nodes.push(
      `<rect class="box" x="${p.x}" y="${p.y}" width="${BOX_W}" ` +
        `height="${BOX_H}" rx="6"/>` +
        `<text class="box-label" x="${p.x + BOX_W / 2}" ` +
        `y="${p.y + BOX_H / 2 + 4}" text-anchor="middle">${esc(box.name)}</text>`,
    );
    box.inputs.forEach((link, port) => {
      wire(outPortPos(link), { x: p.x, y: p.y + BOX_H / 2 + port * 8 });
    });
  });
  const outX = PAD + lastLayer * LAYER_W;
  diag.outputs.forEach((link, i) => {
    const to = { x: outX, y: PAD + i * ROW_H + BOX_H / 2 };
    wire(outPortPos(link), to);
    nodes.push(
      `<circle class="port out" cx="${to.x}" cy="${to.y}" r="4"/>` +
        `<text class="port-label" x="${to.x + 8}" y="${to.y + 4}">` +
        `${diag.cod[i]}</text>`,
    );
  });

  const rows = Math.max(
    diag.dom.length,
    diag.outputs.length,
    ...Object.values(used),
    1,
  );
  const width = outX + PAD + 16;
  const height = PAD * 2 + rows * ROW_H;
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}">` +
    wires.join('') +
    nodes.join('') +
    `</svg>`
  );
}
