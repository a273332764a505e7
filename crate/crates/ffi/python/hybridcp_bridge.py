"""ctypes binding for the hybridcp contractor bridge.

    bridge = Bridge("target/release/libhybridcp_ffi.so")
    i = bridge.create_contractor(["{0}+{1}=10"], 2)
    status, bounds = bridge.contract(i, [0, 10, 0, 3])
"""

import ctypes

FAIL, ENTAILED, CONTRACT, NOTHING = 0, 1, 2, 3


class BridgeError(RuntimeError):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class Bridge:
    def __init__(self, path):
        lib = ctypes.CDLL(path)
        lib.hcp_open.restype = ctypes.c_uint64
        lib.hcp_close.argtypes = [ctypes.c_uint64]
        lib.hcp_close.restype = ctypes.c_int32
        lib.hcp_create_contractor.argtypes = [
            ctypes.c_uint64, ctypes.POINTER(ctypes.c_char_p), ctypes.c_size_t, ctypes.c_size_t]
        lib.hcp_create_contractor.restype = ctypes.c_int64
        lib.hcp_contract.argtypes = [
            ctypes.c_uint64, ctypes.c_size_t, ctypes.POINTER(ctypes.c_double), ctypes.c_size_t]
        lib.hcp_contract.restype = ctypes.c_int32
        lib.hcp_last_error.restype = ctypes.c_char_p
        self._lib = lib
        self._handle = lib.hcp_open()

    def _check(self, code):
        if code < 0:
            raise BridgeError(code, self._lib.hcp_last_error().decode())
        return code

    def create_contractor(self, functions, arity):
        arr = (ctypes.c_char_p * len(functions))(*[f.encode() for f in functions])
        return self._check(self._lib.hcp_create_contractor(self._handle, arr, len(functions), arity))

    def contract(self, index, bounds):
        buf = (ctypes.c_double * len(bounds))(*bounds)
        status = self._check(self._lib.hcp_contract(self._handle, index, buf, len(bounds)))
        return status, list(buf)

    def close(self):
        if self._handle:
            self._check(self._lib.hcp_close(self._handle))
            self._handle = 0

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


if __name__ == "__main__":
    import json
    import pathlib
    import struct
    import sys

    lib = sys.argv[1]
    vectors = pathlib.Path(__file__).parents[2] / "core/tests/data/contract_vectors.json"
    with Bridge(lib) as b:
        for k, v in enumerate(json.loads(vectors.read_text())):
            i = b.create_contractor(v["functions"], len(v["bounds"]) // 2)
            assert i == k
            status, out = b.contract(i, [float(x) for x in v["bounds"]])
            assert status == v["status"], (v, status)
            if "expected" in v:
                assert [struct.pack("<d", x) for x in out] == \
                    [struct.pack("<d", float(x)) for x in v["expected"]], (v, out)
        try:
            b.create_contractor(["{0}+*2=1"], 1)
        except BridgeError as e:
            assert "offset 4" in str(e), e
        else:
            raise AssertionError("bad function accepted")
    print("ok")
