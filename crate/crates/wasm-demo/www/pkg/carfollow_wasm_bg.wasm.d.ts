/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demopair_free: (a: number, b: number) => void;
export const __wbg_dtwview_free: (a: number, b: number) => void;
export const __wbg_get_dtwview_banded_distance: (a: number) => number;
export const __wbg_get_dtwview_cols: (a: number) => number;
export const __wbg_get_dtwview_distance: (a: number) => number;
export const __wbg_get_dtwview_normalized: (a: number) => number;
export const __wbg_get_dtwview_rows: (a: number) => number;
export const __wbg_get_vsfitview_at_search_boundary: (a: number) => number;
export const __wbg_get_vsfitview_critical_spacing: (a: number) => number;
export const __wbg_get_vsfitview_desired_speed: (a: number) => number;
export const __wbg_get_vsfitview_jam_spacing: (a: number) => number;
export const __wbg_get_vsfitview_residual_rmse: (a: number) => number;
export const __wbg_get_vsfitview_slope: (a: number) => number;
export const __wbg_set_dtwview_banded_distance: (a: number, b: number) => void;
export const __wbg_set_dtwview_cols: (a: number, b: number) => void;
export const __wbg_set_dtwview_distance: (a: number, b: number) => void;
export const __wbg_set_dtwview_normalized: (a: number, b: number) => void;
export const __wbg_set_dtwview_rows: (a: number, b: number) => void;
export const __wbg_set_vsfitview_at_search_boundary: (a: number, b: number) => void;
export const __wbg_set_vsfitview_critical_spacing: (a: number, b: number) => void;
export const __wbg_set_vsfitview_desired_speed: (a: number, b: number) => void;
export const __wbg_set_vsfitview_jam_spacing: (a: number, b: number) => void;
export const __wbg_set_vsfitview_residual_rmse: (a: number, b: number) => void;
export const __wbg_set_vsfitview_slope: (a: number, b: number) => void;
export const __wbg_vsfitview_free: (a: number, b: number) => void;
export const demopair_dv: (a: number) => [number, number];
export const demopair_spacing: (a: number) => [number, number];
export const demopair_t: (a: number) => [number, number];
export const demopair_v_follower: (a: number) => [number, number];
export const demopair_v_leader: (a: number) => [number, number];
export const dtw_explore: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const dtwview_cost: (a: number) => [number, number];
export const dtwview_path_x: (a: number) => [number, number];
export const dtwview_path_y: (a: number) => [number, number];
export const safety_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const synthetic_pair: (a: number, b: number, c: number) => [number, number, number];
export const vs_fit: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
