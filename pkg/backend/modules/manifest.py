"""
Run manifests: what produced an output file

A manifest records the subcommand, its full parameter set, the seeds, a
sha256 digest of every input file and the tool version. It is written as
'# manifest: <json>' comment lines ahead of CSV and code output, so
pandas.read_csv(..., comment='#') and code_read both skip it.
"""
from dataclasses import dataclass, field
import hashlib
import json

from modules import __version__

MANIFEST_PREFIX = '# manifest: '


def file_digest(path):
    """sha256 hex digest of a file's bytes"""
    digest = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(65536), b''):
            digest.update(chunk)
    return digest.hexdigest()


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


@dataclass
class RunManifest:
    subcommand: str
    params: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    version: str = __version__

    def add_input(self, path):
        self.inputs[str(path)] = file_digest(path)
        return self

    def to_dict(self):
        return {
            'subcommand': self.subcommand,
            'params': _jsonable(self.params),
            'seeds': _jsonable(self.seeds),
            'inputs': dict(sorted(self.inputs.items())),
            'version': self.version,
        }

    def to_json(self):
        # sorted keys so identical runs give byte-identical headers
        return json.dumps(self.to_dict(), sort_keys=True)

    def comment_block(self):
        return f"{MANIFEST_PREFIX}{self.to_json()}\n"

    def comment_lines(self):
        """The manifest as code-file comments ('manifest: <json>')"""
        return [f"manifest: {self.to_json()}"]


def read_manifest(path):
    """First '# manifest:' line of a file as a dict, or None"""
    with open(path, 'r') as fh:
        for line in fh:
            if line.startswith(MANIFEST_PREFIX):
                return json.loads(line[len(MANIFEST_PREFIX):])
    return None
