"""On-disk result cache: versioned, self-describing JSON entries written
atomically (temp file, then rename). Unreadable entries are ignored."""

import hashlib
import json
import os
import tempfile

FORMAT_VERSION = 1


def digest(operation, params):
    blob = json.dumps({"op": operation, "params": params}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


class ResultCache:
    def __init__(self, directory):
        self.directory = directory

    def _path(self, operation, params):
        return os.path.join(self.directory, f"{operation}-{digest(operation, params)}.json")

    def get(self, operation, params):
        if not self.directory:
            return None
        path = self._path(operation, params)
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
        except (OSError, ValueError):
            return None
        if (
            not isinstance(entry, dict)
            or entry.get("format_version") != FORMAT_VERSION
            or entry.get("operation") != operation
            or entry.get("params") != params
            or "payload" not in entry
        ):
            return None
        return entry["payload"]

    def put(self, operation, params, payload):
        if not self.directory:
            return
        os.makedirs(self.directory, exist_ok=True)
        entry = {
            "format_version": FORMAT_VERSION,
            "operation": operation,
            "params": params,
            "payload": payload,
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self._path(operation, params))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, operation, params, compute):
        hit = self.get(operation, params)
        if hit is not None:
            return hit
        payload = compute()
        self.put(operation, params, payload)
        return payload
