import os

from setuptools import setup

ext_modules = []
if os.environ.get("STARZX_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/starzx/_kernel.pyx"],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build-env dependent
        print(f"starzx: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)
