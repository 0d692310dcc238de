/* tslint:disable */
/* eslint-disable */

export class CurveView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly assured_length_prob: Float64Array;
    readonly coverage: Float64Array;
    readonly expected_length: Float64Array;
    /**
     * Empty unless a length bound was given.
     */
    readonly length_prob: Float64Array;
    readonly pi: Float64Array;
}

export class IntervalView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    estimate: number;
    lower_degenerate: boolean;
    lower: number;
    upper_degenerate: boolean;
    upper: number;
}

/**
 * Coverage and expected covering length along `start:stop:step`.
 */
export function coverage_curve(n: number, q: number, delta: number, method: string, start: number, stop: number, step: number): CurveView;

export function interval(n: number, z: number, q: number, delta: number, method: string): IntervalView;

/**
 * Probability that the exact interval is no longer than `d`, along `start:stop:step`.
 */
export function length_curve(n: number, q: number, delta: number, d: number, start: number, stop: number, step: number): CurveView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curveview_free: (a: number, b: number) => void;
    readonly __wbg_get_intervalview_estimate: (a: number) => number;
    readonly __wbg_get_intervalview_lower: (a: number) => number;
    readonly __wbg_get_intervalview_lower_degenerate: (a: number) => number;
    readonly __wbg_get_intervalview_upper: (a: number) => number;
    readonly __wbg_get_intervalview_upper_degenerate: (a: number) => number;
    readonly __wbg_intervalview_free: (a: number, b: number) => void;
    readonly __wbg_set_intervalview_estimate: (a: number, b: number) => void;
    readonly __wbg_set_intervalview_lower: (a: number, b: number) => void;
    readonly __wbg_set_intervalview_lower_degenerate: (a: number, b: number) => void;
    readonly __wbg_set_intervalview_upper: (a: number, b: number) => void;
    readonly __wbg_set_intervalview_upper_degenerate: (a: number, b: number) => void;
    readonly coverage_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly curveview_assured_length_prob: (a: number) => [number, number];
    readonly curveview_coverage: (a: number) => [number, number];
    readonly curveview_expected_length: (a: number) => [number, number];
    readonly curveview_length_prob: (a: number) => [number, number];
    readonly curveview_pi: (a: number) => [number, number];
    readonly interval: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly length_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
