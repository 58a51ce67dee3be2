import logging
from collections import defaultdict

from scruffy.plugin import Plugin

import asymboost
from .api import UsageError

log = logging.getLogger('plugin')


class PluginManager(object):
    """
    Collects and validates weak learner and command plugins. Provides methods
    to access the plugin collection.

    Plugin loading itself is handled by scruffy, which is configured in the
    environment specification in `setup_env()`.
    """
    def __init__(self):
        """
        Initialise a new PluginManager.
        """
        self._learner_plugins = defaultdict(lambda: None)
        self._command_plugins = defaultdict(lambda: None)

    def register_plugins(self):
        for p in asymboost.env.plugins:
            self.register_plugin(p)

    @property
    def learner_plugins(self):
        return self._learner_plugins

    @property
    def command_plugins(self):
        return self._command_plugins

    def register_plugin(self, plugin):
        """
        Register a new plugin with the PluginManager.

        `plugin` is a subclass of scruffy's Plugin class.
        """
        if hasattr(plugin, 'initialise'):
            plugin.initialise()
        if self.valid_learner_plugin(plugin):
            log.debug("Registering learner plugin: {}".format(plugin))
            self._learner_plugins[plugin.name] = plugin()
        elif self.valid_command_plugin(plugin):
            log.debug("Registering command plugin: {}".format(plugin))
            self._command_plugins[plugin.name] = plugin()
        else:
            log.debug("Ignoring invalid plugin: {}".format(plugin))

    def valid_learner_plugin(self, plugin):
        """
        Validate a learner plugin, ensuring it is a learner plugin and has the
        necessary fields present.

        `plugin` is a subclass of scruffy's Plugin class.
        """
        if (issubclass(plugin, LearnerPlugin)   and
            hasattr(plugin, 'plugin_type')      and plugin.plugin_type == 'learner' and
            hasattr(plugin, 'name')             and plugin.name is not None and
            hasattr(plugin, 'learner_class')    and plugin.learner_class is not None):
            return True
        return False

    def valid_command_plugin(self, plugin):
        """
        Validate a command plugin, ensuring it is a command plugin and has the
        necessary fields present.

        `plugin` is a subclass of scruffy's Plugin class.
        """
        if (issubclass(plugin, CommandPlugin)   and
            hasattr(plugin, 'plugin_type')      and plugin.plugin_type == 'command' and
            hasattr(plugin, 'name')             and plugin.name is not None and
            hasattr(plugin, 'command_class')    and plugin.command_class is not None):
            return True
        return False

    def learner_plugin_with_name(self, name=None):
        """
        Find the learner plugin with the given name.
        """
        return self.learner_plugins[name]

    def command_plugin_with_name(self, name=None):
        """
        Find the command plugin with the given name.
        """
        return self.command_plugins[name]


class AsymBoostPlugin(Plugin):
    @classmethod
    def initialise(cls):
        pass


class LearnerPlugin(AsymBoostPlugin):
    """
    Weak learner plugin parent class.

    `plugin_type` is 'learner'
    `name` is the name used to select the learner (e.g. 'stump')
    `learner_class` is a class whose instances have a `fit(dataset, weights)`
    method returning (weak classifier, weighted error). The weak classifier
    needs `predict`, `predict_many` and `to_dict`.

    See asymboost/plugins/learner/ for an example.
    """
    plugin_type = 'learner'
    name = None
    learner_class = None


class CommandPlugin(AsymBoostPlugin):
    """
    Command plugin parent class.

    `plugin_type` is 'command'
    `name` is the subcommand name (e.g. 'train')
    `command_class` is the Command subclass implementing it
    `aliases` optionally lists alternative subcommand names

    See asymboost/plugins/command/ for examples.
    """
    plugin_type = 'command'
    name = None
    command_class = None

    @classmethod
    def initialise(cls):
        if cls.command_class:
            cls.command_class._plugin = cls
            cls.command_class.command_type = cls.name


#
# Shared plugin manager and convenience methods
#

pm = PluginManager()


def learner(name, *args, **kwargs):
    """
    Instantiate the weak learner registered as `name`.
    """
    plugin = pm.learner_plugin_with_name(name)
    if plugin and plugin.learner_class:
        return plugin.learner_class(*args, **kwargs)
    raise UsageError("Unknown weak learner '{}', expected one of {}".format(name, sorted(pm.learner_plugins)))
