from __future__ import print_function

import logging

from asymboost.command import *
from asymboost.data import UCI_DATASETS, fetch_dataset
from asymboost.harness import write_run_manifest

log = logging.getLogger('command')


class FetchCommand(Command):
    """
    Download a UCI dataset (or any CSV URL) and convert it to a canonical
    dataset CSV with its manifest.
    """
    help = 'download a benchmark dataset'

    @classmethod
    def add_arguments(cls, sp):
        sp.add_argument('source', nargs='?', default=None, help='one of {} or an http(s) URL'.format(', '.join(sorted(UCI_DATASETS))))
        sp.add_argument('--raw', action='store_true', default=False, help='only save the downloaded file')
        sp.add_argument('--list', action='store_true', default=False, help='list the known datasets and exit')
        Command.add_csv_arguments(sp)

    def run(self):
        if self.arg('list'):
            for name in sorted(UCI_DATASETS):
                print("{:8} {}".format(name, UCI_DATASETS[name].description))
            return 0
        if not self.arg('source'):
            raise UsageError("A dataset name or URL is required")

        directory = self.output_directory()
        raw_path, csv_path, manifest_path = fetch_dataset(self.arg('source'), directory, self.csv_schema(),
                                                          raw=self.arg('raw'))
        outputs = [p for p in (raw_path, csv_path, manifest_path) if p]
        self.config['fetch'] = {'source': self.arg('source'), 'raw': bool(self.arg('raw'))}
        write_run_manifest(directory, 'fetch', self.config, self.started, outputs)

        for p in outputs:
            print(p)
        return 0


class FetchCommandPlugin(CommandPlugin):
    plugin_type = 'command'
    name = 'fetch'
    command_class = FetchCommand
