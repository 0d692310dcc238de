/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curveview_free: (a: number, b: number) => void;
export const __wbg_get_intervalview_estimate: (a: number) => number;
export const __wbg_get_intervalview_lower: (a: number) => number;
export const __wbg_get_intervalview_lower_degenerate: (a: number) => number;
export const __wbg_get_intervalview_upper: (a: number) => number;
export const __wbg_get_intervalview_upper_degenerate: (a: number) => number;
export const __wbg_intervalview_free: (a: number, b: number) => void;
export const __wbg_set_intervalview_estimate: (a: number, b: number) => void;
export const __wbg_set_intervalview_lower: (a: number, b: number) => void;
export const __wbg_set_intervalview_lower_degenerate: (a: number, b: number) => void;
export const __wbg_set_intervalview_upper: (a: number, b: number) => void;
export const __wbg_set_intervalview_upper_degenerate: (a: number, b: number) => void;
export const coverage_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const curveview_assured_length_prob: (a: number) => [number, number];
export const curveview_coverage: (a: number) => [number, number];
export const curveview_expected_length: (a: number) => [number, number];
export const curveview_length_prob: (a: number) => [number, number];
export const curveview_pi: (a: number) => [number, number];
export const interval: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const length_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
