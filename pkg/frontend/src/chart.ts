/** Minimal renderer for the grammar documents the server emits.
 *
 * Handles the five server mark shapes (point, bar, pre-binned bar, line,
 * rect heatmap) plus the optional text-label layer, drawing straight to
 * SVG. Data values are taken verbatim from the document's inline
 * `data.values`; nothing is recomputed client-side.
 */

const SVG_NS = 'http://www.w3.org/2000/svg';

const PALETTE = [
  '#4c78a8', '#f58518', '#54a24b', '#e45756',
  '#72b7b2', '#eeca3b', '#b279a2', '#9d755d',
];

type Datum = Record<string, unknown>;

interface Channel {
  field: string;
  type?: string;
  bin?: string;
  scale?: { type?: string; domain?: [number, number]; scheme?: string };
}

interface LayerSpec {
  mark: string | { type: string; dy?: number };
  encoding: Record<string, Channel>;
  transform?: Array<{ filter: string }>;
}

interface Grammar {
  title?: string;
  data: { values: Datum[] };
  mark?: LayerSpec['mark'];
  encoding?: LayerSpec['encoding'];
  layer?: LayerSpec[];
}

const MARGIN = { top: 24, right: 12, bottom: 32, left: 48 };

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, String(value));
  return node;
}

function numbers(values: Datum[], field: string): number[] {
  return values
    .map((d) => d[field])
    .filter((v): v is number => typeof v === 'number' && Number.isFinite(v));
}

function linearScale(lo: number, hi: number, rangeLo: number, rangeHi: number) {
  const span = hi - lo || 1;
  return (v: number) => rangeLo + ((v - lo) / span) * (rangeHi - rangeLo);
}

function logScale(lo: number, hi: number, rangeLo: number, rangeHi: number) {
  const safeLo = Math.log(Math.max(lo, 1e-12));
  const safeHi = Math.log(Math.max(hi, 1e-12));
  const span = safeHi - safeLo || 1;
  return (v: number) =>
    rangeLo + ((Math.log(Math.max(v, 1e-12)) - safeLo) / span) * (rangeHi - rangeLo);
}

function bandScale(categories: string[], rangeLo: number, rangeHi: number) {
  const step = (rangeHi - rangeLo) / Math.max(categories.length, 1);
  const index = new Map(categories.map((c, i) => [c, i]));
  return {
    center: (v: unknown) => rangeLo + (index.get(String(v)) ?? 0) * step + step / 2,
    width: step,
  };
}

function categoriesOf(values: Datum[], field: string): string[] {
  const seen: string[] = [];
  for (const d of values) {
    const key = String(d[field]);
    if (!seen.includes(key)) seen.push(key);
  }
  return seen;
}

/** Diverging blue -> white -> orange over the channel's domain. */
function divergingColor(v: number, domain: [number, number]): string {
  const t = Math.min(1, Math.max(0, (v - domain[0]) / (domain[1] - domain[0] || 1)));
  const mix = (a: number, b: number, f: number) => Math.round(a + (b - a) * f);
  const [r, g, b] =
    t < 0.5
      ? [mix(49, 255, t * 2), mix(107, 255, t * 2), mix(177, 255, t * 2)]
      : [mix(255, 230, (t - 0.5) * 2), mix(255, 133, (t - 0.5) * 2), mix(255, 36, (t - 0.5) * 2)];
  return `rgb(${r},${g},${b})`;
}

interface Frame {
  width: number;
  height: number;
  plotX: (v: number) => number;
  plotW: number;
}

function positionScales(layer: LayerSpec, values: Datum[], width: number, height: number) {
  const xChannel = layer.encoding.x;
  const yChannel = layer.encoding.y;
  const plotLeft = MARGIN.left;
  const plotRight = width - MARGIN.right;
  const plotTop = MARGIN.top;
  const plotBottom = height - MARGIN.bottom;

  let x: (d: Datum) => number;
  let x2: ((d: Datum) => number) | null = null;
  let bandW = 0;
  if (xChannel && xChannel.type === 'quantitative') {
    const x2Channel = layer.encoding.x2;
    const xs = numbers(values, xChannel.field).concat(
      x2Channel ? numbers(values, x2Channel.field) : [],
    );
    const lo = xs.length ? Math.min(...xs) : 0;
    const hi = xs.length ? Math.max(...xs) : 1;
    const scale =
      xChannel.scale?.type === 'log'
        ? logScale(lo, hi, plotLeft, plotRight)
        : linearScale(lo, hi, plotLeft, plotRight);
    x = (d) => scale(Number(d[xChannel.field]));
    if (x2Channel) x2 = (d) => scale(Number(d[x2Channel.field]));
  } else if (xChannel) {
    const band = bandScale(categoriesOf(values, xChannel.field), plotLeft, plotRight);
    bandW = band.width;
    x = (d) => band.center(d[xChannel.field]);
  } else {
    x = () => (plotLeft + plotRight) / 2;
  }

  let y: (d: Datum) => number;
  let yZero = plotBottom;
  let yBandH = 0;
  if (yChannel && yChannel.type === 'quantitative') {
    const ys = numbers(values, yChannel.field);
    const lo = Math.min(0, ...(ys.length ? ys : [0]));
    const hi = ys.length ? Math.max(...ys) : 1;
    const scale =
      yChannel.scale?.type === 'log'
        ? logScale(Math.max(lo, 1e-12), hi, plotBottom, plotTop)
        : linearScale(lo, hi, plotBottom, plotTop);
    y = (d) => scale(Number(d[yChannel.field]));
    yZero = scale(Math.max(lo, 0));
  } else if (yChannel) {
    const band = bandScale(categoriesOf(values, yChannel.field), plotTop, plotBottom);
    yBandH = band.width;
    y = (d) => band.center(d[yChannel.field]);
  } else {
    y = () => (plotTop + plotBottom) / 2;
  }

  return { x, x2, y, bandW, yBandH, yZero, plotLeft, plotRight, plotTop, plotBottom };
}

function colorOf(layer: LayerSpec, values: Datum[]): (d: Datum) => string {
  const channel = layer.encoding.color;
  if (!channel) return () => PALETTE[0];
  if (channel.type === 'quantitative') {
    const domain = channel.scale?.domain ?? [
      Math.min(...numbers(values, channel.field), 0),
      Math.max(...numbers(values, channel.field), 1),
    ];
    return (d) => {
      const v = d[channel.field];
      return typeof v === 'number' ? divergingColor(v, domain) : '#ddd';
    };
  }
  const categories = categoriesOf(values, channel.field);
  return (d) => PALETTE[categories.indexOf(String(d[channel.field])) % PALETTE.length];
}

function layerFilter(layer: LayerSpec): (d: Datum) => boolean {
  // The server only emits `datum.<field> !== ''` filters on label layers.
  const expr = layer.transform?.[0]?.filter;
  const match = expr?.match(/^datum\.(\w+) !== ''$/);
  if (!match) return () => true;
  const field = match[1];
  return (d) => d[field] !== '' && d[field] != null;
}

function drawLayer(svg: SVGSVGElement, layer: LayerSpec, values: Datum[],
                   width: number, height: number): void {
  const markType = typeof layer.mark === 'string' ? layer.mark : layer.mark.type;
  const dy = typeof layer.mark === 'object' ? (layer.mark.dy ?? 0) : 0;
  const rows = values.filter(layerFilter(layer));
  const { x, x2, y, bandW, yBandH, yZero } = positionScales(layer, values, width, height);
  const fill = colorOf(layer, values);

  for (const d of rows) {
    if (markType === 'point') {
      svg.appendChild(
        el('circle', {
          class: 'mark-point', cx: x(d), cy: y(d), r: 4,
          fill: fill(d), 'fill-opacity': 0.75,
        }),
      );
    } else if (markType === 'bar') {
      const left = x2 ? x(d) : x(d) - (bandW * 0.8) / 2;
      const right = x2 ? x2(d) : left + bandW * 0.8;
      const top = Math.min(y(d), yZero);
      svg.appendChild(
        el('rect', {
          class: 'mark-bar', x: left, y: top,
          width: Math.max(Math.abs(right - left) - 1, 1),
          height: Math.max(Math.abs(yZero - y(d)), 1),
          fill: fill(d),
        }),
      );
    } else if (markType === 'rect') {
      svg.appendChild(
        el('rect', {
          class: 'mark-rect',
          x: x(d) - bandW / 2, y: y(d) - yBandH / 2,
          width: Math.max(bandW - 1, 1), height: Math.max(yBandH - 1, 1),
          fill: fill(d),
        }),
      );
    } else if (markType === 'text') {
      const label = el('text', {
        class: 'mark-label', x: x(d), y: y(d) + dy,
        'text-anchor': 'middle', 'font-size': 10,
      });
      label.textContent = String(d[layer.encoding.text?.field ?? ''] ?? '');
      svg.appendChild(label);
    }
  }

  if (markType === 'line') {
    const points = rows.map((d) => `${x(d)},${y(d)}`).join(' ');
    svg.appendChild(
      el('polyline', {
        class: 'mark-line', points, fill: 'none',
        stroke: PALETTE[0], 'stroke-width': 2,
      }),
    );
  }
}

function drawAxes(svg: SVGSVGElement, layer: LayerSpec, width: number, height: number): void {
  const bottom = height - MARGIN.bottom;
  svg.appendChild(el('line', {
    class: 'axis', x1: MARGIN.left, y1: bottom, x2: width - MARGIN.right, y2: bottom,
    stroke: '#999',
  }));
  svg.appendChild(el('line', {
    class: 'axis', x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: bottom,
    stroke: '#999',
  }));
  const xField = layer.encoding.x?.field ?? '';
  const yField = layer.encoding.y?.field ?? '';
  const xLabel = el('text', {
    class: 'axis-label', x: (MARGIN.left + width - MARGIN.right) / 2, y: height - 8,
    'text-anchor': 'middle', 'font-size': 11, fill: '#555',
  });
  xLabel.textContent = xField;
  svg.appendChild(xLabel);
  const yLabel = el('text', {
    class: 'axis-label', x: 12, y: (MARGIN.top + bottom) / 2,
    'text-anchor': 'middle', 'font-size': 11, fill: '#555',
    transform: `rotate(-90 12 ${(MARGIN.top + bottom) / 2})`,
  });
  yLabel.textContent = yField;
  svg.appendChild(yLabel);
}

export function renderGrammar(grammar: Grammar, width = 360, height = 280): SVGSVGElement {
  const svg = el('svg', {
    width, height, viewBox: `0 0 ${width} ${height}`, class: 'vizcanvas-chart',
  });
  const values = grammar.data.values;
  const layers: LayerSpec[] = grammar.layer
    ? grammar.layer
    : [{ mark: grammar.mark ?? 'point', encoding: grammar.encoding ?? {} }];

  if (grammar.title) {
    const title = el('text', {
      class: 'chart-title', x: width / 2, y: 14,
      'text-anchor': 'middle', 'font-size': 12, 'font-weight': 'bold',
    });
    title.textContent = grammar.title.length > 48
      ? grammar.title.slice(0, 45) + '...'
      : grammar.title;
    svg.appendChild(title);
  }
  drawAxes(svg, layers[0], width, height);
  for (const layer of layers) drawLayer(svg, layer, values, width, height);
  return svg;
}

/** Render a payload's grammar; on any failure fall back to a plain
 * summary of the payload so the node is never blank. */
export function renderChart(
  grammarJson: string,
  width = 360,
  height = 280,
): HTMLElement {
  const container = document.createElement('div');
  container.className = 'chart-container';
  try {
    const grammar = JSON.parse(grammarJson) as Grammar;
    container.appendChild(renderGrammar(grammar, width, height));
  } catch (error) {
    container.classList.add('chart-fallback');
    const pre = document.createElement('pre');
    pre.textContent = `chart render failed: ${String(error)}\n` +
      grammarJson.slice(0, 400);
    container.appendChild(pre);
  }
  return container;
}
