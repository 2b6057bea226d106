/* tslint:disable */
/* eslint-disable */

/**
 * One simulated pair sampled at 10 Hz.
 */
export class DemoPair {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    dv(): Float64Array;
    spacing(): Float64Array;
    t(): Float64Array;
    v_follower(): Float64Array;
    v_leader(): Float64Array;
}

/**
 * DTW result with the optimal path and, for small inputs, the full
 * accumulated-cost matrix (row-major).
 */
export class DtwView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    cost(): Float64Array;
    path_x(): Uint32Array;
    path_y(): Uint32Array;
    /**
     * Distance under the requested band; equals `distance` when unbanded.
     */
    banded_distance: number;
    cols: number;
    distance: number;
    normalized: number;
    rows: number;
}

export class VsFitView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    at_search_boundary: boolean;
    critical_spacing: number;
    desired_speed: number;
    jam_spacing: number;
    residual_rmse: number;
    slope: number;
}

/**
 * Aligns two series. A negative `band` means unconstrained.
 */
export function dtw_explore(x: Float64Array, y: Float64Array, band: number): DtwView;

/**
 * Critical-event percentage at each threshold for one pair.
 */
export function safety_sweep(spacing: Float64Array, dv: Float64Array, drac: boolean, thresholds: Float64Array): Float64Array;

/**
 * Simulates a two-vehicle platoon with an EV or ICEV follower.
 */
export function synthetic_pair(seed: number, follower_ev: boolean, duration_s: number): DemoPair;

/**
 * Fits the two-segment v-s curve. A non-positive `jam` selects the default
 * jam spacing.
 */
export function vs_fit(spacing: Float64Array, speed: Float64Array, jam: number, desired: number): VsFitView;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demopair_free: (a: number, b: number) => void;
    readonly __wbg_dtwview_free: (a: number, b: number) => void;
    readonly __wbg_get_dtwview_banded_distance: (a: number) => number;
    readonly __wbg_get_dtwview_cols: (a: number) => number;
    readonly __wbg_get_dtwview_distance: (a: number) => number;
    readonly __wbg_get_dtwview_normalized: (a: number) => number;
    readonly __wbg_get_dtwview_rows: (a: number) => number;
    readonly __wbg_get_vsfitview_at_search_boundary: (a: number) => number;
    readonly __wbg_get_vsfitview_critical_spacing: (a: number) => number;
    readonly __wbg_get_vsfitview_desired_speed: (a: number) => number;
    readonly __wbg_get_vsfitview_jam_spacing: (a: number) => number;
    readonly __wbg_get_vsfitview_residual_rmse: (a: number) => number;
    readonly __wbg_get_vsfitview_slope: (a: number) => number;
    readonly __wbg_set_dtwview_banded_distance: (a: number, b: number) => void;
    readonly __wbg_set_dtwview_cols: (a: number, b: number) => void;
    readonly __wbg_set_dtwview_distance: (a: number, b: number) => void;
    readonly __wbg_set_dtwview_normalized: (a: number, b: number) => void;
    readonly __wbg_set_dtwview_rows: (a: number, b: number) => void;
    readonly __wbg_set_vsfitview_at_search_boundary: (a: number, b: number) => void;
    readonly __wbg_set_vsfitview_critical_spacing: (a: number, b: number) => void;
    readonly __wbg_set_vsfitview_desired_speed: (a: number, b: number) => void;
    readonly __wbg_set_vsfitview_jam_spacing: (a: number, b: number) => void;
    readonly __wbg_set_vsfitview_residual_rmse: (a: number, b: number) => void;
    readonly __wbg_set_vsfitview_slope: (a: number, b: number) => void;
    readonly __wbg_vsfitview_free: (a: number, b: number) => void;
    readonly demopair_dv: (a: number) => [number, number];
    readonly demopair_spacing: (a: number) => [number, number];
    readonly demopair_t: (a: number) => [number, number];
    readonly demopair_v_follower: (a: number) => [number, number];
    readonly demopair_v_leader: (a: number) => [number, number];
    readonly dtw_explore: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly dtwview_cost: (a: number) => [number, number];
    readonly dtwview_path_x: (a: number) => [number, number];
    readonly dtwview_path_y: (a: number) => [number, number];
    readonly safety_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly synthetic_pair: (a: number, b: number, c: number) => [number, number, number];
    readonly vs_fit: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
