/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_hawkesrun_free: (a: number, b: number) => void;
export const __wbg_oufit_free: (a: number, b: number) => void;
export const __wbg_powercurves_free: (a: number, b: number) => void;
export const hawkes: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const hawkesrun_branchingRatio: (a: number) => number;
export const hawkesrun_events: (a: number) => [number, number];
export const hawkesrun_intensity: (a: number) => [number, number];
export const hawkesrun_stationaryRate: (a: number) => number;
export const hawkesrun_times: (a: number) => [number, number];
export const ouFit: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const oufit_cdf: (a: number) => [number, number];
export const oufit_density: (a: number) => [number, number];
export const oufit_densityHat: (a: number) => [number, number];
export const oufit_edf: (a: number) => [number, number];
export const oufit_path: (a: number) => [number, number];
export const oufit_stats: (a: number) => [number, number];
export const oufit_x: (a: number) => [number, number];
export const powerCurves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const powercurves_cvm: (a: number) => [number, number];
export const powercurves_ks: (a: number) => [number, number];
export const powercurves_laump: (a: number) => [number, number];
export const powercurves_laumpAnalytic: (a: number) => [number, number];
export const powercurves_rho: (a: number) => [number, number];
export const powercurves_thresholds: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
