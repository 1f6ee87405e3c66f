# Copyright (c) 2025 Renata Hodovan, Akos Kiss.
#
# Licensed under the BSD 3-Clause License
# <LICENSE.rst or https://opensource.org/licenses/BSD-3-Clause>.
# This file may not be copied, modified, or distributed except
# according to those terms.

import csv
import json
import logging
import os

logger = logging.getLogger(__name__)


class ReportWriter:
    """
    Abstract base class of report writers that persist report documents
    (nested dictionaries of JSON-compatible values).
    """

    extension = None

    def write(self, document, f):
        """
        Write a document into an open text file.

        Raises :exc:`NotImplementedError` by default.

        :param dict document: The report document.
        :param f: Text file opened for writing.
        """
        raise NotImplementedError()

    def save(self, document, out_dir, name):
        """
        Write a document into ``<out_dir>/<name>.<extension>``.

        :return: Path of the written file.
        :rtype: str
        """
        fn = os.path.join(out_dir, f'{name}.{self.extension}')
        with open(fn, 'w', encoding='utf-8', newline='') as f:
            self.write(document, f)
        logger.debug('Report saved to %s.', fn)
        return fn


class JsonReportWriter(ReportWriter):
    """
    Report writer producing indented JSON. Keys keep their insertion order,
    so equal documents give byte-identical files.
    """

    extension = 'json'

    def __init__(self, indent=2):
        """
        :param int indent: Indentation of nested values (default: 2).
        """
        self._indent = indent

    def write(self, document, f):
        json.dump(document, f, indent=self._indent)
        f.write('\n')


def flatten(document, prefix=''):
    """
    Flatten a nested document into a single-level dictionary with dotted
    keys. Lists of dictionaries are flattened with their indices as keys,
    other lists are joined by spaces.
    """
    flat = {}
    for key, value in document.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            flat.update(flatten(value, f'{name}.'))
        elif isinstance(value, (list, tuple)) and any(isinstance(v, dict) for v in value):
            for idx, item in enumerate(value):
                flat.update(flatten(item, f'{name}.{idx}.'))
        elif isinstance(value, (list, tuple)):
            flat[name] = ' '.join(_cell(v) for v in value)
        else:
            flat[name] = _cell(value)
    return flat


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return ''
    return str(value)


class CsvReportWriter(ReportWriter):
    """
    Report writer producing a header line and a single row of the flattened
    document.
    """

    extension = 'csv'

    def write(self, document, f):
        flat = flatten(document)
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(flat.keys())
        writer.writerow(flat.values())
