class UVMError(RuntimeError):
    pass


class FactoryError(UVMError):
    pass


class ConfigDbError(UVMError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else ""


class ProtocolError(UVMError):
    pass


class TestRegistryError(UVMError):
    __test__ = False
