/* tslint:disable */
/* eslint-disable */

/**
 * One self-exciting record with its conditional intensity on a grid.
 */
export class HawkesRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly branchingRatio: number;
    readonly events: Float64Array;
    readonly intensity: Float64Array;
    readonly stationaryRate: number;
    readonly times: Float64Array;
}

/**
 * An Ornstein–Uhlenbeck path compared with its invariant law.
 */
export class OuFit {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly cdf: Float64Array;
    readonly densityHat: Float64Array;
    readonly density: Float64Array;
    readonly edf: Float64Array;
    /**
     * Path values at the Euler steps.
     */
    readonly path: Float64Array;
    /**
     * EDF CVM, EDF KS, density CVM, density KS.
     */
    readonly stats: Float64Array;
    readonly x: Float64Array;
}

/**
 * Limit power of the CVM, KS and LAUMP tests at level `alpha`.
 */
export class PowerCurves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly cvm: Float64Array;
    readonly ks: Float64Array;
    readonly laumpAnalytic: Float64Array;
    readonly laump: Float64Array;
    readonly rho: Float64Array;
    /**
     * CVM and KS thresholds used for the curves.
     */
    readonly thresholds: Float64Array;
}

/**
 * Hawkes process with base rate `s` and kernel `a exp(-b t)` on `[0, L]`,
 * observed on `[0, horizon]`. The intensity is evaluated at `n_grid + 1`
 * equally spaced times.
 */
export function hawkes(s: number, a: number, b: number, support: number, horizon: number, n_grid: number, seed: number): HawkesRun;

/**
 * Simulates `dX = -theta_true X dt + dW` and compares its empirical and
 * local-time estimates with the invariant law of the null `-theta X`.
 */
export function ouFit(theta_null: number, theta_true: number, horizon: number, dt: number, seed: number): OuFit;

/**
 * Calibrates the thresholds with `m` replicates, then simulates the power
 * on `rho = 0, rho_step, ..., rho_max` with a fresh set of `m` paths.
 */
export function powerCurves(alpha: number, m: number, n_steps: number, rho_max: number, rho_step: number, seed: number): PowerCurves;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_hawkesrun_free: (a: number, b: number) => void;
    readonly __wbg_oufit_free: (a: number, b: number) => void;
    readonly __wbg_powercurves_free: (a: number, b: number) => void;
    readonly hawkes: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly hawkesrun_branchingRatio: (a: number) => number;
    readonly hawkesrun_events: (a: number) => [number, number];
    readonly hawkesrun_intensity: (a: number) => [number, number];
    readonly hawkesrun_stationaryRate: (a: number) => number;
    readonly hawkesrun_times: (a: number) => [number, number];
    readonly ouFit: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly oufit_cdf: (a: number) => [number, number];
    readonly oufit_density: (a: number) => [number, number];
    readonly oufit_densityHat: (a: number) => [number, number];
    readonly oufit_edf: (a: number) => [number, number];
    readonly oufit_path: (a: number) => [number, number];
    readonly oufit_stats: (a: number) => [number, number];
    readonly oufit_x: (a: number) => [number, number];
    readonly powerCurves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly powercurves_cvm: (a: number) => [number, number];
    readonly powercurves_ks: (a: number) => [number, number];
    readonly powercurves_laump: (a: number) => [number, number];
    readonly powercurves_laumpAnalytic: (a: number) => [number, number];
    readonly powercurves_rho: (a: number) => [number, number];
    readonly powercurves_thresholds: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
