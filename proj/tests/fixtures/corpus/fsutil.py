"""Filesystem helpers shared by the CLI tools."""

import hashlib
import os
import shutil
import tempfile


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def file_digest(path, algorithm="sha256", chunk_size=65536):
    """Hex digest of a file's content, streamed in chunks."""
    digest = hashlib.new(algorithm)
    with open(path, "rb") as handle:
        while True:
            chunk = handle.read(chunk_size)
            if not chunk:
                break
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write(path, data, mode="w", encoding="utf-8"):
    """Write via a temp file and rename so readers never see a torn file."""
    directory = os.path.dirname(path) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory)
    try:
        with os.fdopen(fd, mode, encoding=None if "b" in mode else encoding) as handle:
            handle.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        os.unlink(tmp_path)
        raise


def walk_files(root, suffixes=None):
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            if suffixes and not name.endswith(tuple(suffixes)):
                continue
            yield os.path.join(dirpath, name)


def disk_usage(root):
    total = 0
    for path in walk_files(root):
        try:
            total += os.path.getsize(path)
        except OSError:
            continue
    return total


def safe_remove_tree(path, keep_root=False):
    if not os.path.isdir(path):
        return False
    for entry in os.listdir(path):
        full = os.path.join(path, entry)
        if os.path.isdir(full) and not os.path.islink(full):
            shutil.rmtree(full)
        else:
            os.unlink(full)
    if not keep_root:
        os.rmdir(path)
    return True
