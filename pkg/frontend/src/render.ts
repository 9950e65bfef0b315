// DOM rendering: an SVG canvas for the layered graph plus a sidebar with the
// catalog checkboxes and per-source confidence sliders. Rebuilt wholesale on
// every store change; the graphs involved are small enough that diffing
// would be pure overhead.

import { buildScene, formatConfidence, type Scene, type SceneNode } from './scene.js';
import type { ExplorerStore } from './store.js';
import { selectorKey, type RefutedItem } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl(tag: string): SVGElement {
  return document.createElementNS(SVG_NS, tag) as SVGElement;
}

function nodeClasses(node: SceneNode): string {
  const classes = ['node', `kind-${node.kind.toLowerCase()}`];
  if (node.ghosted) classes.push('ghosted');
  if (node.struck) classes.push('struck');
  if (node.faded) classes.push('faded');
  if (node.glow) classes.push('glow');
  if (node.selected) classes.push('selected');
  return classes.join(' ');
}

function renderGraph(scene: Scene, store: ExplorerStore): SVGElement {
  const svg = svgEl('svg');
  svg.setAttribute('class', 'graph');
  svg.setAttribute('viewBox', `0 0 ${scene.width} ${scene.height}`);
  svg.setAttribute('width', String(scene.width));
  svg.setAttribute('height', String(scene.height));

  for (const edge of scene.edges) {
    const from = scene.nodes.find((n) => n.id === edge.from)!;
    const to = scene.nodes.find((n) => n.id === edge.to)!;
    const line = svgEl('line');
    line.setAttribute('class', `edge rel-${edge.relation}${edge.faded ? ' faded' : ''}`);
    // stored edges point dependent -> supporter; draw the arrow with the flow
    line.setAttribute('x1', String(to.x + 70));
    line.setAttribute('y1', String(to.y + 18));
    line.setAttribute('x2', String(from.x));
    line.setAttribute('y2', String(from.y + 18));
    line.setAttribute('stroke', edge.color);
    svg.appendChild(line);
  }

  for (const node of scene.nodes) {
    const group = svgEl('g');
    group.setAttribute('class', nodeClasses(node));
    group.setAttribute('data-node-id', node.id);
    group.setAttribute('data-status', node.struck ? 'REFUTED' : node.ghosted ? 'OUT' : 'IN');
    group.setAttribute('transform', `translate(${node.x},${node.y})`);

    const shape = node.kind === 'Activity' ? svgEl('rect') : svgEl('ellipse');
    if (node.kind === 'Activity') {
      shape.setAttribute('width', '140');
      shape.setAttribute('height', '36');
      shape.setAttribute('rx', '4');
    } else {
      shape.setAttribute('cx', '70');
      shape.setAttribute('cy', '18');
      shape.setAttribute('rx', '70');
      shape.setAttribute('ry', '18');
    }
    shape.setAttribute('fill', node.fill);
    group.appendChild(shape);

    const text = svgEl('text');
    text.setAttribute('x', '70');
    text.setAttribute('y', '22');
    text.setAttribute('text-anchor', 'middle');
    text.textContent = node.label;
    group.appendChild(text);

    if (node.badge !== null) {
      const badge = svgEl('text');
      badge.setAttribute('class', 'confidence-badge');
      badge.setAttribute('data-badge-for', node.id);
      badge.setAttribute('x', '70');
      badge.setAttribute('y', '-6');
      badge.setAttribute('text-anchor', 'middle');
      badge.textContent = node.badge;
      group.appendChild(badge);
    }

    group.addEventListener('mouseenter', () => {
      void store.hover({ node: node.id });
    });
    group.addEventListener('mouseleave', () => store.clearHover());
    group.addEventListener('click', () => store.select(node.id));
    svg.appendChild(group);
  }
  return svg;
}

interface SidebarRow {
  label: string;
  item: RefutedItem;
  hover: { dimension: string; key: string } | { node: string };
}

function sidebarSection(
  store: ExplorerStore,
  title: string,
  rows: SidebarRow[],
): HTMLElement {
  const section = document.createElement('section');
  section.className = 'catalog-section';
  const heading = document.createElement('h3');
  heading.textContent = title;
  section.appendChild(heading);
  for (const row of rows) {
    const label = document.createElement('label');
    label.className = 'catalog-row';
    const checkbox = document.createElement('input');
    checkbox.type = 'checkbox';
    checkbox.checked = store.isRefuted(row.item);
    checkbox.setAttribute('data-refute-key', selectorKey(row.item));
    checkbox.addEventListener('change', () => {
      void store.toggleRefute(row.item);
    });
    label.appendChild(checkbox);
    const text = document.createElement('span');
    text.textContent = row.label;
    label.appendChild(text);
    label.addEventListener('mouseenter', () => {
      void store.hover(row.hover);
    });
    label.addEventListener('mouseleave', () => store.clearHover());
    section.appendChild(label);
  }
  return section;
}

function sourceSliders(store: ExplorerStore): HTMLElement {
  const section = document.createElement('section');
  section.className = 'catalog-section sliders';
  const heading = document.createElement('h3');
  heading.textContent = 'Source confidence';
  section.appendChild(heading);
  for (const source of store.catalog.source_entities) {
    const row = document.createElement('label');
    row.className = 'slider-row';
    const text = document.createElement('span');
    const current = store.feed.nodes[source]?.confidence;
    text.textContent = `${source} (${formatConfidence(current)})`;
    row.appendChild(text);
    const slider = document.createElement('input');
    slider.type = 'range';
    slider.min = '0';
    slider.max = '1';
    slider.step = '0.05';
    slider.value = String(store.confidenceOverride(source) ?? current ?? 1);
    slider.setAttribute('data-confidence-for', source);
    slider.addEventListener('change', () => {
      void store.setConfidence(source, Number(slider.value));
    });
    row.appendChild(slider);
    section.appendChild(row);
  }
  return section;
}

function renderSidebar(store: ExplorerStore): HTMLElement {
  const sidebar = document.createElement('aside');
  sidebar.className = 'sidebar';
  const catalog = store.catalog;
  sidebar.appendChild(
    sidebarSection(
      store,
      'Agents',
      catalog.agents.map((id) => ({
        label: id,
        item: { dimension: 'agents', key: id },
        hover: { dimension: 'agents', key: id },
      })),
    ),
  );
  sidebar.appendChild(
    sidebarSection(
      store,
      'Sources',
      catalog.source_entities.map((id) => ({
        label: id,
        item: { dimension: 'source_entities', key: id },
        hover: { node: id },
      })),
    ),
  );
  sidebar.appendChild(
    sidebarSection(
      store,
      'Source classes',
      Object.keys(catalog.source_classes)
        .sort()
        .map((key) => ({
          label: key,
          item: { dimension: 'source_classes', key },
          hover: { dimension: 'source_classes', key },
        })),
    ),
  );
  sidebar.appendChild(
    sidebarSection(
      store,
      'Operations',
      Object.keys(catalog.operation_classes)
        .sort()
        .map((key) => ({
          label: key,
          item: { dimension: 'operation_classes', key },
          hover: { dimension: 'operation_classes', key },
        })),
    ),
  );
  sidebar.appendChild(sourceSliders(store));
  return sidebar;
}

/** Rebuild the explorer UI inside the container from the store's state. */
export function render(store: ExplorerStore, container: HTMLElement): void {
  const scene = buildScene(store.graph, store.feed, store.view);
  container.textContent = '';
  container.classList.add('explorer');
  container.appendChild(renderSidebar(store));
  const canvas = document.createElement('main');
  canvas.className = 'canvas';
  canvas.appendChild(renderGraph(scene, store));
  container.appendChild(canvas);
}
