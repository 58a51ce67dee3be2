import json
import logging

log = logging.getLogger('api')

version = 1

__version__ = "0.1.0"


class AsymBoostError(Exception):
    """
    Base class for every error raised by asymboost.

    `exit_code` is the process exit status the command line front end uses
    when the error escapes a command.
    """
    exit_code = 1


class UsageError(AsymBoostError):
    """
    Raised when command line flags or config values are invalid.
    """
    exit_code = 2


class InvalidGammaError(UsageError):
    """
    Raised when an asymmetry parameter falls outside the open interval (0, 1).
    """
    pass


class InvalidWeightsError(UsageError):
    """
    Raised when a weight vector has the wrong length, negative entries or does
    not sum to one.
    """
    pass


class DataError(AsymBoostError):
    """
    Raised when input data cannot be used.
    """
    exit_code = 3


class DatasetFormatError(DataError):
    """
    Raised when a CSV file has a malformed row. `line` is the 1-based line
    number in the source file, if known.
    """
    def __init__(self, message, line=None):
        if line is not None:
            message = "line {}: {}".format(line, message)
        super(DatasetFormatError, self).__init__(message)
        self.line = line


class DegenerateDatasetError(DataError):
    """
    Raised when a dataset has a single class or no feature that can split it.
    """
    pass


class DimensionMismatchError(DataError):
    """
    Raised when feature vectors, weight vectors or datasets disagree in size.
    """
    pass


class MissingFieldError(DataError):
    """
    Raised when a document is validated and has a required field missing.
    """
    pass


class InvalidDocumentError(DataError):
    """
    Raised when a JSON document cannot be parsed or has the wrong version.
    """
    pass


class IdentityCheckError(AsymBoostError):
    """
    Raised when the algebraic identities of a training run do not hold within
    tolerance.
    """
    exit_code = 4


class NumericalError(AsymBoostError):
    """
    Raised when a weight update produces non-finite or zero normalisers.
    """
    exit_code = 4


def dump_json(d):
    """
    Serialise `d` deterministically: sorted keys, fixed indentation and
    shortest round-trip float representation.
    """
    return json.dumps(d, sort_keys=True, indent=2, allow_nan=False) + '\n'


class Document(object):
    """
    Top-level JSON document class.

    Subclasses list their payload fields in `_fields`, mapping each field name
    to a flag saying whether it is required. `_top_fields` are written at the
    top level of the document next to the `data` object. Documents with
    `_flat` set write their fields at the top level too, with no `data`
    object.
    """
    _top_fields = ['type', 'version']
    _fields = {}
    _flat = False

    type = None
    version = version

    def __init__(self, data=None, *args, **kwargs):
        # process any data that was passed in
        if data:
            self.from_json(data)

        # any other kwargs are treated as field values
        for field in kwargs:
            setattr(self, field, kwargs[field])

    def __str__(self):
        return self.to_json()

    def __getattr__(self, name):
        """
        If a defined field is requested that doesn't have a value set,
        return None.
        """
        if name in self._fields:
            return None
        raise AttributeError(name)

    def to_dict(self):
        """
        Return a dictionary representation of the document.
        """
        d = {field: getattr(self, field) for field in self._top_fields}
        payload = d if self._flat else d.setdefault('data', {})
        for field in self._fields:
            if field in self.__dict__:
                payload[field] = getattr(self, field)
        return d

    def from_dict(self, d):
        """
        Initialise a document from a dictionary.
        """
        for key in d:
            if key == 'data':
                for dkey in d['data']:
                    setattr(self, str(dkey), d['data'][dkey])
            else:
                setattr(self, str(key), d[key])

    def to_json(self):
        return dump_json(self.to_dict())

    def from_json(self, data):
        try:
            d = json.loads(data)
        except ValueError as e:
            raise InvalidDocumentError("Invalid JSON document: {}".format(e))
        if not isinstance(d, dict):
            raise InvalidDocumentError("JSON document is not an object")
        self.from_dict(d)

    def validate(self):
        """
        Validate the document.

        Ensure all the required fields are present and not None, and that the
        document type and version match this class.
        """
        required_fields = [x for x in self._fields if self._fields[x]]
        for field in (self._top_fields + required_fields):
            if getattr(self, field, None) is None:
                raise MissingFieldError(field)
        if self.type != self.__class__.type:
            raise InvalidDocumentError("Expected a '{}' document, got '{}'".format(self.__class__.type, self.type))
        if self.version != version:
            raise InvalidDocumentError("Unsupported document version: {}".format(self.version))

    def save(self, path):
        """
        Write the document to `path`.
        """
        log.debug("Writing {} document to {}".format(self.type, path))
        with open(path, 'w') as f:
            f.write(self.to_json())
        return path

    @classmethod
    def load(cls, path):
        """
        Read and validate a document of this type from `path`.
        """
        with open(path) as f:
            doc = cls(data=f.read())
        doc.validate()
        return doc


class ClassifierDocument(Document):
    """
    A trained strong classifier.

    {
        "type":         "classifier",
        "version":      1,
        "gamma":        0.875,
        "dimension":    2,
        "rounds":       [{"alpha": 0.69, "feature": 0, "threshold": 1.5, "polarity": -1}]
    }
    """
    _fields = {'gamma': True, 'rounds': True, 'dimension': False, 'stop_reason': False}
    _flat = True

    type = 'classifier'


class DatasetManifest(Document):
    """
    Provenance of a generated or ingested dataset.

    `checksum` is the SHA-256 of the dataset's canonical CSV serialisation.
    """
    _fields = {
        'source': True,
        'spec': False,
        'schema': False,
        'seed': False,
        'generator': False,
        'm': True,
        'n': True,
        'd': True,
        'checksum': True,
        'separable': False,
        'source_order': False,
        'url': False
    }

    type = 'dataset_manifest'


class ResidualReportDocument(Document):
    """
    Maximum residuals of the identities checked by `core.verify_identities`.
    """
    _fields = {'residuals': True, 'tolerance': True, 'ok': True, 'rounds': True, 'clamped_rounds': False}

    type = 'residual_report'


class LoocvReportDocument(Document):
    """
    Leave-one-out evaluation of one asymmetry value.
    """
    _fields = {'gamma': True, 'rounds': True, 'report': True, 'folds': True}

    type = 'loocv_report'


class CurveManifest(Document):
    """
    Index of the curve files written by a curve run. `empty` lists the gamma
    values whose series had no rows.
    """
    _fields = {'files': True, 'empty': True}

    type = 'curve_manifest'


class RunManifest(Document):
    """
    Description of a command run: resolved config, seeds, library version and
    wall time. This is the only output file that carries a timestamp.
    """
    _fields = {
        'command': True,
        'config': True,
        'library_version': True,
        'started': True,
        'wall_time': True,
        'outputs': False,
        'seed': False
    }

    type = 'run_manifest'
