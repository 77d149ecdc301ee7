import os
import sys

# Locate the built extension: either an installed package, or a build tree
# advertised by VARLP_CORE_DIR (set by ctest).
core_dir = os.environ.get("VARLP_CORE_DIR")
if core_dir:
    sys.path.insert(0, core_dir)


def _ensure_package():
    try:
        import varlp  # noqa: F401
        return
    except ImportError:
        pass
    if core_dir:
        # expose the bare _core module as the varlp package for smoke tests
        import importlib
        import types

        core = importlib.import_module("_core")
        pkg = types.ModuleType("varlp")
        for name in dir(core):
            if not name.startswith("__"):
                setattr(pkg, name, getattr(core, name))
        pkg._core = core
        sys.modules["varlp"] = pkg


_ensure_package()
