from __future__ import print_function

import logging

from asymboost.command import *
from asymboost.data import CloudSpec, cloud_manifest_fields, gen_cloud, write_dataset
from asymboost.harness import write_run_manifest

log = logging.getLogger('command')


class SynthCommand(Command):
    """
    Generate a synthetic cloud and write it with its manifest.
    """
    help = 'generate a synthetic cloud dataset'

    @classmethod
    def add_arguments(cls, sp):
        sp.add_argument('--preset', choices=sorted(CloudSpec.PRESETS), default=None, help='base cloud geometry')
        sp.add_argument('--pos', type=int, default=None, help='number of positive samples')
        sp.add_argument('--neg', type=int, default=None, help='number of negative samples')
        sp.add_argument('--inner', type=float, default=None, help='radius of the positive disc')
        sp.add_argument('--outer', type=float, default=None, help='outer radius of the negative annulus')
        sp.add_argument('--gap', type=float, default=None, help='radial gap between the classes')
        sp.add_argument('--overlap', type=float, default=None, help='fraction of each band crossing into the other')
        sp.add_argument('--seed', type=int, default=None, help='random seed')
        sp.add_argument('--name', default='cloud', help='base name of the written files')

    def build_config(self):
        super(SynthCommand, self).build_config()
        c = self.loaded_config['cloud']
        self.config['cloud'] = {
            'preset': str(c['preset']),
            'n_pos': int(c['n_pos']),
            'n_neg': int(c['n_neg']),
            'seed': int(c['seed']),
        }
        flags = {
            'preset': self.arg('preset'),
            'n_pos': self.arg('pos'),
            'n_neg': self.arg('neg'),
            'seed': self.arg('seed'),
            'inner_radius': self.arg('inner'),
            'outer_radius': self.arg('outer'),
            'gap': self.arg('gap'),
            'overlap_fraction': self.arg('overlap'),
        }
        for key, value in flags.items():
            if value is not None:
                self.config['cloud'][key] = value

    def cloud_spec(self):
        params = dict(self.config['cloud'])
        preset = params.pop('preset')
        spec = CloudSpec.preset(preset, **params)
        spec.validate()
        return spec

    def run(self):
        spec = self.cloud_spec()
        dataset = gen_cloud(spec)
        directory = self.output_directory()
        csv_path, manifest_path, manifest = write_dataset(dataset, directory, self.arg('name') or 'cloud',
                                                          cloud_manifest_fields(spec, dataset))
        self.config['cloud'] = spec.to_dict()
        write_run_manifest(directory, 'synth', self.config, self.started, [csv_path, manifest_path], seed=spec.seed)

        print("m={} n={} separable={}".format(dataset.m, dataset.n, 'true' if manifest.separable else 'false'))
        print(csv_path)
        print(manifest_path)
        return 0


class SynthCommandPlugin(CommandPlugin):
    plugin_type = 'command'
    name = 'synth'
    command_class = SynthCommand
