/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_edges_free: (a: number, b: number) => void;
export const __wbg_get_product_approx: (a: number) => bigint;
export const __wbg_get_product_bound: (a: number) => bigint;
export const __wbg_get_product_exact: (a: number) => bigint;
export const __wbg_get_product_stages: (a: number) => number;
export const __wbg_product_free: (a: number, b: number) => void;
export const __wbg_set_product_approx: (a: number, b: bigint) => void;
export const __wbg_set_product_bound: (a: number, b: bigint) => void;
export const __wbg_set_product_exact: (a: number, b: bigint) => void;
export const __wbg_set_product_stages: (a: number, b: number) => void;
export const designs: () => [number, number];
export const edges: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const edges_pixels: (a: number) => [number, number];
export const edges_psnr: (a: number) => number;
export const error_map: (a: number, b: number) => [number, number, number, number];
export const multiply: (a: number, b: number, c: number, d: bigint, e: bigint) => [number, number, number];
export const report: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
