/* @ts-self-types="./carfollow_wasm.d.ts" */

/**
 * One simulated pair sampled at 10 Hz.
 */
export class DemoPair {
    static __wrap(ptr) {
        const obj = Object.create(DemoPair.prototype);
        obj.__wbg_ptr = ptr;
        DemoPairFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        DemoPairFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_demopair_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    dv() {
        const ret = wasm.demopair_dv(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    spacing() {
        const ret = wasm.demopair_spacing(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    t() {
        const ret = wasm.demopair_t(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    v_follower() {
        const ret = wasm.demopair_v_follower(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    v_leader() {
        const ret = wasm.demopair_v_leader(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) DemoPair.prototype[Symbol.dispose] = DemoPair.prototype.free;

/**
 * DTW result with the optimal path and, for small inputs, the full
 * accumulated-cost matrix (row-major).
 */
export class DtwView {
    static __wrap(ptr) {
        const obj = Object.create(DtwView.prototype);
        obj.__wbg_ptr = ptr;
        DtwViewFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        DtwViewFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_dtwview_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    cost() {
        const ret = wasm.dtwview_cost(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Uint32Array}
     */
    path_x() {
        const ret = wasm.dtwview_path_x(this.__wbg_ptr);
        var v1 = getArrayU32FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
        return v1;
    }
    /**
     * @returns {Uint32Array}
     */
    path_y() {
        const ret = wasm.dtwview_path_y(this.__wbg_ptr);
        var v1 = getArrayU32FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 4, 4);
        return v1;
    }
    /**
     * Distance under the requested band; equals `distance` when unbanded.
     * @returns {number}
     */
    get banded_distance() {
        const ret = wasm.__wbg_get_dtwview_banded_distance(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get cols() {
        const ret = wasm.__wbg_get_dtwview_cols(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get distance() {
        const ret = wasm.__wbg_get_dtwview_distance(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get normalized() {
        const ret = wasm.__wbg_get_dtwview_normalized(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get rows() {
        const ret = wasm.__wbg_get_dtwview_rows(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Distance under the requested band; equals `distance` when unbanded.
     * @param {number} arg0
     */
    set banded_distance(arg0) {
        wasm.__wbg_set_dtwview_banded_distance(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set cols(arg0) {
        wasm.__wbg_set_dtwview_cols(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set distance(arg0) {
        wasm.__wbg_set_dtwview_distance(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set normalized(arg0) {
        wasm.__wbg_set_dtwview_normalized(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set rows(arg0) {
        wasm.__wbg_set_dtwview_rows(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) DtwView.prototype[Symbol.dispose] = DtwView.prototype.free;

export class VsFitView {
    static __wrap(ptr) {
        const obj = Object.create(VsFitView.prototype);
        obj.__wbg_ptr = ptr;
        VsFitViewFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        VsFitViewFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_vsfitview_free(ptr, 0);
    }
    /**
     * @returns {boolean}
     */
    get at_search_boundary() {
        const ret = wasm.__wbg_get_vsfitview_at_search_boundary(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get critical_spacing() {
        const ret = wasm.__wbg_get_vsfitview_critical_spacing(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get desired_speed() {
        const ret = wasm.__wbg_get_vsfitview_desired_speed(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get jam_spacing() {
        const ret = wasm.__wbg_get_vsfitview_jam_spacing(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get residual_rmse() {
        const ret = wasm.__wbg_get_vsfitview_residual_rmse(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get slope() {
        const ret = wasm.__wbg_get_vsfitview_slope(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {boolean} arg0
     */
    set at_search_boundary(arg0) {
        wasm.__wbg_set_vsfitview_at_search_boundary(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set critical_spacing(arg0) {
        wasm.__wbg_set_vsfitview_critical_spacing(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set desired_speed(arg0) {
        wasm.__wbg_set_vsfitview_desired_speed(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set jam_spacing(arg0) {
        wasm.__wbg_set_vsfitview_jam_spacing(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set residual_rmse(arg0) {
        wasm.__wbg_set_vsfitview_residual_rmse(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set slope(arg0) {
        wasm.__wbg_set_vsfitview_slope(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) VsFitView.prototype[Symbol.dispose] = VsFitView.prototype.free;

/**
 * Aligns two series. A negative `band` means unconstrained.
 * @param {Float64Array} x
 * @param {Float64Array} y
 * @param {number} band
 * @returns {DtwView}
 */
export function dtw_explore(x, y, band) {
    const ptr0 = passArrayF64ToWasm0(x, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ptr1 = passArrayF64ToWasm0(y, wasm.__wbindgen_malloc);
    const len1 = WASM_VECTOR_LEN;
    const ret = wasm.dtw_explore(ptr0, len0, ptr1, len1, band);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return DtwView.__wrap(ret[0]);
}

/**
 * Critical-event percentage at each threshold for one pair.
 * @param {Float64Array} spacing
 * @param {Float64Array} dv
 * @param {boolean} drac
 * @param {Float64Array} thresholds
 * @returns {Float64Array}
 */
export function safety_sweep(spacing, dv, drac, thresholds) {
    const ptr0 = passArrayF64ToWasm0(spacing, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ptr1 = passArrayF64ToWasm0(dv, wasm.__wbindgen_malloc);
    const len1 = WASM_VECTOR_LEN;
    const ptr2 = passArrayF64ToWasm0(thresholds, wasm.__wbindgen_malloc);
    const len2 = WASM_VECTOR_LEN;
    const ret = wasm.safety_sweep(ptr0, len0, ptr1, len1, drac, ptr2, len2);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v4 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v4;
}

/**
 * Simulates a two-vehicle platoon with an EV or ICEV follower.
 * @param {number} seed
 * @param {boolean} follower_ev
 * @param {number} duration_s
 * @returns {DemoPair}
 */
export function synthetic_pair(seed, follower_ev, duration_s) {
    const ret = wasm.synthetic_pair(seed, follower_ev, duration_s);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return DemoPair.__wrap(ret[0]);
}

/**
 * Fits the two-segment v-s curve. A non-positive `jam` selects the default
 * jam spacing.
 * @param {Float64Array} spacing
 * @param {Float64Array} speed
 * @param {number} jam
 * @param {number} desired
 * @returns {VsFitView}
 */
export function vs_fit(spacing, speed, jam, desired) {
    const ptr0 = passArrayF64ToWasm0(spacing, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ptr1 = passArrayF64ToWasm0(speed, wasm.__wbindgen_malloc);
    const len1 = WASM_VECTOR_LEN;
    const ret = wasm.vs_fit(ptr0, len0, ptr1, len1, jam, desired);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return VsFitView.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./carfollow_wasm_bg.js": import0,
    };
}

const DemoPairFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_demopair_free(ptr, 1));
const DtwViewFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_dtwview_free(ptr, 1));
const VsFitViewFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_vsfitview_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

function getArrayU32FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getUint32ArrayMemory0().subarray(ptr / 4, ptr / 4 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint32ArrayMemory0 = null;
function getUint32ArrayMemory0() {
    if (cachedUint32ArrayMemory0 === null || cachedUint32ArrayMemory0.byteLength === 0) {
        cachedUint32ArrayMemory0 = new Uint32Array(wasm.memory.buffer);
    }
    return cachedUint32ArrayMemory0;
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passArrayF64ToWasm0(arg, malloc) {
    const ptr = malloc(arg.length * 8, 8) >>> 0;
    getFloat64ArrayMemory0().set(arg, ptr / 8);
    WASM_VECTOR_LEN = arg.length;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint32ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('carfollow_wasm_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
