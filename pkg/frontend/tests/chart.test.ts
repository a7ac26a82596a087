import { describe, expect, it } from 'vitest';

import { renderChart, renderGrammar } from '../src/chart.js';

const VEGA = 'https://vega.github.io/schema/vega-lite/v5.json';

function scatterGrammar(rows: Array<[number, number]>) {
  return {
    $schema: VEGA,
    title: 't',
    data: { values: rows.map(([a, b]) => ({ gdp: a, birth: b })) },
    mark: 'point',
    encoding: {
      x: { field: 'gdp', type: 'quantitative' },
      y: { field: 'birth', type: 'quantitative' },
    },
  };
}

describe('renderGrammar', () => {
  it('draws one point per data row', () => {
    const svg = renderGrammar(scatterGrammar([[1, 2], [3, 4], [5, 6]]) as never);
    expect(svg.querySelectorAll('circle.mark-point').length).toBe(3);
  });

  it('draws heatmap cells equal to the matrix entries', () => {
    const columns = ['a', 'b', 'c'];
    const values: Array<Record<string, unknown>> = [];
    for (const x of columns) {
      for (const y of columns) {
        values.push({ column_x: x, column_y: y, correlation: x === y ? 1 : 0.5 });
      }
    }
    const grammar = {
      data: { values },
      mark: 'rect',
      encoding: {
        x: { field: 'column_x', type: 'nominal' },
        y: { field: 'column_y', type: 'nominal' },
        color: { field: 'correlation', type: 'quantitative',
                 scale: { domain: [-1, 1] as [number, number] } },
      },
    };
    const svg = renderGrammar(grammar as never);
    expect(svg.querySelectorAll('rect.mark-rect').length).toBe(9);
  });

  it('draws pre-binned histogram bars', () => {
    const grammar = {
      data: {
        values: [
          { v_bin_start: 0, v_bin_end: 5, 'count(v)': 3 },
          { v_bin_start: 5, v_bin_end: 10, 'count(v)': 7 },
        ],
      },
      mark: 'bar',
      encoding: {
        x: { field: 'v_bin_start', bin: 'binned', type: 'quantitative' },
        x2: { field: 'v_bin_end' },
        y: { field: 'count(v)', type: 'quantitative' },
      },
    };
    const svg = renderGrammar(grammar as never);
    const bars = [...svg.querySelectorAll('rect.mark-bar')];
    expect(bars.length).toBe(2);
    const widths = bars.map((b) => Number(b.getAttribute('width')));
    expect(widths[0]).toBeGreaterThan(10);
    expect(Math.abs(widths[0] - widths[1])).toBeLessThan(2);
  });

  it('renders a line as a single polyline', () => {
    const grammar = {
      data: { values: [{ x: 1, y: 1 }, { x: 2, y: 3 }, { x: 3, y: 2 }] },
      mark: 'line',
      encoding: {
        x: { field: 'x', type: 'quantitative' },
        y: { field: 'y', type: 'quantitative' },
      },
    };
    const svg = renderGrammar(grammar as never);
    expect(svg.querySelectorAll('polyline.mark-line').length).toBe(1);
  });

  it('renders only non-empty labels from a layered document', () => {
    const values = [
      { x: 1, y: 1, quantile_label: 'bottom' },
      { x: 2, y: 2, quantile_label: '' },
      { x: 3, y: 3, quantile_label: 'top' },
    ];
    const grammar = {
      data: { values },
      layer: [
        {
          mark: 'point',
          encoding: {
            x: { field: 'x', type: 'quantitative' },
            y: { field: 'y', type: 'quantitative' },
          },
        },
        {
          mark: { type: 'text', dy: -8 },
          transform: [{ filter: "datum.quantile_label !== ''" }],
          encoding: {
            x: { field: 'x', type: 'quantitative' },
            y: { field: 'y', type: 'quantitative' },
            text: { field: 'quantile_label', type: 'nominal' },
          },
        },
      ],
    };
    const svg = renderGrammar(grammar as never);
    expect(svg.querySelectorAll('circle.mark-point').length).toBe(3);
    const labels = [...svg.querySelectorAll('text.mark-label')];
    expect(labels.map((l) => l.textContent).sort()).toEqual(['bottom', 'top']);
  });

  it('log scale positions still land inside the plot', () => {
    const grammar = scatterGrammar([[1, 1], [1000, 2], [1000000, 3]]) as never as {
      encoding: { x: { scale?: object } };
    };
    grammar.encoding.x.scale = { type: 'log' };
    const svg = renderGrammar(grammar as never, 360, 280);
    for (const circle of svg.querySelectorAll('circle.mark-point')) {
      const cx = Number(circle.getAttribute('cx'));
      expect(cx).toBeGreaterThanOrEqual(0);
      expect(cx).toBeLessThanOrEqual(360);
    }
  });
});

describe('renderChart', () => {
  it('wraps the svg for a valid grammar document', () => {
    const element = renderChart(JSON.stringify(scatterGrammar([[1, 2]])));
    expect(element.querySelector('svg.vizcanvas-chart')).not.toBeNull();
    expect(element.classList.contains('chart-fallback')).toBe(false);
  });

  it('falls back to a raw summary on garbage', () => {
    const element = renderChart('{definitely not json');
    expect(element.classList.contains('chart-fallback')).toBe(true);
    expect(element.querySelector('pre')!.textContent).toContain('render failed');
  });
});
