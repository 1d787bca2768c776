"""Project tree walk: find settings and source files, apply exclusions."""

from __future__ import annotations

import fnmatch
import os
from dataclasses import dataclass, field

DEFAULT_EXCLUDES = (
    "Intermediate/**",
    "Saved/**",
    "Binaries/**",
    "DerivedDataCache/**",
    ".git/**",
)

INI_EXT = ".ini"
CPP_EXT = ".cpp"
HEADER_EXT = ".h"
_KINDS = (INI_EXT, CPP_EXT, HEADER_EXT)


class ScanError(OSError):
    """The project root cannot be scanned."""


@dataclass(frozen=True)
class FileInventory:
    root: str
    ini_files: tuple[str, ...] = ()
    cpp_files: tuple[str, ...] = ()
    header_files: tuple[str, ...] = ()
    skipped: tuple[tuple[str, str], ...] = field(default=())


def to_posix(path: str) -> str:
    return path.replace(os.sep, "/") if os.sep != "/" else path


def matches_exclusion(rel_path: str, pattern: str) -> bool:
    """gitignore-flavoured glob test on a root-relative POSIX path.

    A leading ``/`` anchors the pattern at the root; otherwise it may match
    starting at any directory, so ``Intermediate/**`` also covers a plugin's
    ``Plugins/Foo/Intermediate/...``.
    """
    if pattern.startswith("/"):
        return fnmatch.fnmatchcase(rel_path, pattern[1:])
    parts = rel_path.split("/")
    return any(fnmatch.fnmatchcase("/".join(parts[i:]), pattern) for i in range(len(parts)))


def scan(root: str | os.PathLike, exclusions: list[str] | tuple[str, ...] = (),
         use_default_excludes: bool = True) -> FileInventory:
    """Inventory the ``.ini``, ``.cpp`` and ``.h`` files under ``root``.

    Symbolic links are never followed. Excluded or unreadable files of an
    analyzable kind are reported in ``skipped`` with a reason.
    """
    root = os.path.abspath(os.fspath(root))
    if not os.path.isdir(root):
        raise ScanError(f"project directory does not exist: {root}")
    if not os.access(root, os.R_OK | os.X_OK):
        raise ScanError(f"project directory is not readable: {root}")

    patterns = (list(DEFAULT_EXCLUDES) if use_default_excludes else []) + list(exclusions)
    found: dict[str, list[str]] = {ext: [] for ext in _KINDS}
    skipped: list[tuple[str, str]] = []

    def on_error(err: OSError):
        skipped.append((to_posix(err.filename or ""), f"unreadable: {err.strerror}"))

    for dirpath, dirnames, filenames in os.walk(root, onerror=on_error, followlinks=False):
        dirnames.sort()
        for name in sorted(filenames):
            ext = os.path.splitext(name)[1].lower()
            if ext not in found:
                continue
            full = os.path.join(dirpath, name)
            rel = to_posix(os.path.relpath(full, root))
            hit = next((p for p in patterns if matches_exclusion(rel, p)), None)
            if hit is not None:
                skipped.append((to_posix(full), f"excluded: {hit}"))
            elif os.path.islink(full):
                skipped.append((to_posix(full), "symbolic link"))
            elif not os.access(full, os.R_OK):
                skipped.append((to_posix(full), "unreadable: permission denied"))
            else:
                found[ext].append(to_posix(full))

    return FileInventory(
        root=to_posix(root),
        ini_files=tuple(sorted(found[INI_EXT])),
        cpp_files=tuple(sorted(found[CPP_EXT])),
        header_files=tuple(sorted(found[HEADER_EXT])),
        skipped=tuple(sorted(skipped)),
    )
