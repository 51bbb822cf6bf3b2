"""
Tests for the configuration manager
"""

import json

import pytest
import yaml

from defect_audit.config.manager import CONFIG_DIR_ENV, AppConfig, ConfigManager


@pytest.fixture
def manager(tmp_path):
    return ConfigManager(str(tmp_path / 'config'))


class TestConfigManager:
    def test_defaults(self, manager):
        assert manager.get('audit.rounds') == 20
        assert manager.get('audit.parallel_schedule') == [1, 5, 10, 15, 20, 25]
        assert manager.get('adequacy.threshold') == 0.01
        assert manager.get('adequacy.cap') == 300
        assert manager.get('subject.isolation') == 'inprocess'
        assert manager.get('missing.key', 'fallback') == 'fallback'
        assert manager.validate_config() == []
        assert not manager.config_file.exists()

    def test_environment_selects_directory(self, tmp_path, monkeypatch):
        monkeypatch.setenv(CONFIG_DIR_ENV, str(tmp_path / 'from-env'))
        assert ConfigManager().config_dir == tmp_path / 'from-env'

    def test_set_only_known_keys(self, manager):
        assert manager.set('audit.rounds', 5)
        assert manager.get('audit.rounds') == 5
        assert not manager.set('audit.nonexistent', 1)
        assert not manager.set('nowhere.rounds', 1)
        assert manager.set('external_adapters.javaish', 'java -jar adapter.jar')
        assert manager.get('external_adapters.javaish') == 'java -jar adapter.jar'

    def test_save_and_reload_yaml(self, manager):
        manager.set('adequacy.workers', 4)
        assert manager.save_config()
        saved = yaml.safe_load(manager.config_file.read_text())
        assert saved['adequacy']['workers'] == 4
        assert ConfigManager(str(manager.config_dir)).get('adequacy.workers') == 4

    def test_save_json(self, manager):
        assert manager.save_config('json')
        assert json.loads(manager.config_file_json.read_text())['audit']['rounds'] == 20

    def test_unknown_keys_are_ignored(self, tmp_path):
        directory = tmp_path / 'config'
        directory.mkdir()
        (directory / 'config.yaml').write_text('audit:\n  rounds: 3\n  colour: blue\nlegacy: true\n')
        manager = ConfigManager(str(directory))
        assert manager.get('audit.rounds') == 3
        assert manager.get('audit.colour') is None

    def test_unreadable_file_falls_back_to_defaults(self, tmp_path):
        directory = tmp_path / 'config'
        directory.mkdir()
        (directory / 'config.yaml').write_text('audit: [unclosed\n')
        assert ConfigManager(str(directory)).get('audit.rounds') == 20

    @pytest.mark.parametrize('key, value, issue', [
        ('subject.suite_timeout', 0, 'subject.suite_timeout'),
        ('subject.isolation', 'docker', 'subject.isolation'),
        ('audit.rounds', 0, 'audit.rounds'),
        ('audit.parallel_schedule', [], 'audit.parallel_schedule'),
        ('adequacy.threshold', 1.5, 'adequacy.threshold'),
        ('adequacy.cap', -1, 'adequacy.cap'),
        ('adequacy.budget_seconds', -1, 'adequacy.budget_seconds'),
        ('adequacy.workers', 0, 'adequacy.workers'),
        ('ui.default_output_format', 'xml', 'ui.default_output_format'),
    ])
    def test_validation(self, manager, key, value, issue):
        manager.set(key, value)
        issues = manager.validate_config()
        assert len(issues) == 1
        assert issues[0].startswith(issue)

    def test_zero_budget_is_valid(self, manager):
        manager.set('adequacy.budget_seconds', 0)
        assert manager.validate_config() == []

    def test_reset(self, manager):
        manager.set('audit.rounds', 2)
        manager.reset_to_defaults()
        assert manager.get('audit.rounds') == 20

    def test_sections_and_derived_settings(self, manager):
        assert manager.get_section('adequacy')['cap'] == 300
        assert manager.get_section('debug_mode') is None
        assert set(manager.get_all()) >= {'subject', 'audit', 'adequacy', 'ui', 'external_adapters'}
        manager.set('audit.parallel_schedule', [1, 2])
        config: AppConfig = manager.config
        rounds = config.round_config()
        assert rounds.parallelism_schedule == (1, 2)
        assert rounds.level_for(3) == 2
        assert config.subject_settings().fuel == 1_000_000
