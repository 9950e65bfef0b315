// A fetch stub that replays payloads captured from the real planprov
// service, tracking every request so tests can assert what the UI sent.
// State transitions mirror the service semantics for the scenarios the
// tests exercise (flier1 class refutation, ElevationMap override, reset).

import type { FetchLike } from '../src/api.js';

import graphDoc from './fixtures/graph.json';
import catalogDoc from './fixtures/catalog.json';
import stateBaseline from './fixtures/state_baseline.json';
import stateFlierRefuted from './fixtures/state_flier_refuted.json';
import stateElevationOverride from './fixtures/state_elevation_override.json';
import pertinenceTakeImage from './fixtures/explain_pertinence_take_image.json';
import impactTakeImage from './fixtures/explain_impact_take_image.json';
import pertinenceFlierTakeImage from './fixtures/explain_pertinence_take_image_flier.json';
import impactFlierTakeImage from './fixtures/explain_impact_take_image_flier.json';

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

export interface FakeApi {
  fetchFn: FetchLike;
  requests: RecordedRequest[];
  fixtures: {
    graph: typeof graphDoc;
    catalog: typeof catalogDoc;
    stateBaseline: typeof stateBaseline;
    stateFlierRefuted: typeof stateFlierRefuted;
    stateElevationOverride: typeof stateElevationOverride;
    pertinenceTakeImage: typeof pertinenceTakeImage;
    impactTakeImage: typeof impactTakeImage;
    pertinenceFlierTakeImage: typeof pertinenceFlierTakeImage;
    impactFlierTakeImage: typeof impactFlierTakeImage;
  };
}

const TAKE_IMAGE_FOCUS = [...(pertinenceTakeImage.focus as string[])].sort().join('|');
const FLIER_TAKE_IMAGE_FOCUS = (pertinenceFlierTakeImage.focus as string[]).join('|');

export function makeFakeApi(): FakeApi {
  const requests: RecordedRequest[] = [];
  let currentState: unknown = stateBaseline;

  const respond = (status: number, payload: unknown) =>
    Promise.resolve({
      ok: status < 400,
      status,
      json: () => Promise.resolve(payload),
    });

  const fetchFn: FetchLike = (url, init) => {
    const method = init?.method ?? 'GET';
    const target = new URL(url, 'http://fake');
    const path = target.pathname;
    const body = init?.body ? JSON.parse(init.body) : undefined;
    requests.push({ method, path, body });

    if (method === 'GET' && path === '/graphs/g') return respond(200, graphDoc);
    if (method === 'GET' && path === '/graphs/g/catalog') return respond(200, catalogDoc);
    if (method === 'POST' && path === '/sessions') {
      return respond(201, { session_id: 's1' });
    }
    if (method === 'GET' && path === '/sessions/s1/state') {
      return respond(200, currentState);
    }
    if (method === 'PUT' && path === '/sessions/s1/refuted') {
      const items = body as unknown[];
      if (items.length === 0) {
        currentState = stateBaseline;
      } else if (
        items.length === 1 &&
        JSON.stringify(items[0]) === JSON.stringify({ dimension: 'agents', key: 'flier1' })
      ) {
        currentState = stateFlierRefuted;
      } else {
        return respond(409, { detail: `fake server has no canned state for ${init?.body}` });
      }
      return respond(200, currentState);
    }
    if (method === 'PUT' && path === '/sessions/s1/appraisals') {
      const overrides = body as Record<string, number>;
      const keys = Object.keys(overrides);
      if (keys.length === 0) {
        currentState = stateBaseline;
      } else if (keys.length === 1 && overrides['ElevationMap'] === 0.5) {
        currentState = stateElevationOverride;
      } else {
        return respond(422, { detail: `fake server has no canned state for ${init?.body}` });
      }
      return respond(200, currentState);
    }
    if (method === 'GET' && path === '/sessions/s1/explain') {
      const kind = target.searchParams.get('kind');
      const focus = target.searchParams.getAll('focus');
      const key = [...focus].sort().join('|');
      if (key === TAKE_IMAGE_FOCUS) {
        if (kind === 'pertinence') return respond(200, pertinenceTakeImage);
        if (kind === 'impact') return respond(200, impactTakeImage);
      }
      if (key === FLIER_TAKE_IMAGE_FOCUS) {
        if (kind === 'pertinence') return respond(200, pertinenceFlierTakeImage);
        if (kind === 'impact') return respond(200, impactFlierTakeImage);
      }
      if (kind === 'pertinence') {
        return respond(200, { kind, focus, emphasized: [...focus].sort() });
      }
      return respond(200, { kind, focus, impacted: [] });
    }
    return respond(404, { detail: `fake server: no route ${method} ${path}` });
  };

  return {
    fetchFn,
    requests,
    fixtures: {
      graph: graphDoc,
      catalog: catalogDoc,
      stateBaseline,
      stateFlierRefuted,
      stateElevationOverride,
      pertinenceTakeImage,
      impactTakeImage,
      pertinenceFlierTakeImage,
      impactFlierTakeImage,
    },
  };
}
