from setuptools import Extension, setup

# The compiled walker kernel is optional: hodgeshap falls back to the pure
# Python twin (hodgeshap._walk_py) when the extension is absent.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("hodgeshap._walk", ["src/hodgeshap/_walk.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
