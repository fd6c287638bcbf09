"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class TooLarge(ValueError):
    pass


class NoEdges(ValueError):
    pass


class UnsupportedStructure(ValueError):
    pass


class ExtensionFailed(RuntimeError):
    """A greedy tight-path extension hit a vertex set with no common completion."""

    def __init__(self, message: str, progress: int, pair_index: int | None = None):
        self.progress = progress
        self.pair_index = pair_index
        super().__init__(message)


class EmbeddingIncomplete(RuntimeError):
    def __init__(self, message: str, result, pair_index: int | None = None):
        self.result = result
        self.pair_index = pair_index
        super().__init__(message)

    @property
    def survivors(self):
        return self.result.survivors


class AbsorberShortfall(RuntimeError):
    def __init__(self, vertices):
        self.vertices = tuple(sorted(vertices))
        super().__init__(f"no absorber found for vertices {list(self.vertices)}")


class NoAbsorber(KeyError):
    pass
