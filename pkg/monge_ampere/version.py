from importlib.metadata import PackageNotFoundError, version

try:
    VERSION = version("monge_ampere")
except PackageNotFoundError:
    # Running from a source checkout that was never installed
    VERSION = "0.0.0+unknown"
