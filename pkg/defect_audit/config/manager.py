"""
Configuration manager for defect-audit settings
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from ..subject.types import SubjectSettings
from ..workability.verdicts import RoundConfig

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = 'DEFECT_AUDIT_CONFIG_DIR'
ISOLATION_MODES = ('inprocess', 'subprocess')


@dataclass
class SubjectConfig:
    """Execution limits and workspace handling"""
    suite_timeout: float = 60.0  # seconds
    test_timeout: float = 10.0  # seconds
    fuel: int = 1_000_000
    isolation: str = 'inprocess'
    workspace_dir: Optional[str] = None
    keep_workspaces: bool = False


@dataclass
class AuditConfig:
    rounds: int = 20
    parallel_schedule: List[int] = field(default_factory=lambda: [1, 5, 10, 15, 20, 25])


@dataclass
class AdequacyConfig:
    threshold: float = 0.01
    cap: int = 300
    budget_seconds: float = 60.0
    per_variant_timeout: float = 60.0
    workers: int = 1


@dataclass
class UIConfig:
    default_output_format: str = 'table'
    table_style: str = 'grid'
    color_output: bool = True


@dataclass
class AppConfig:
    """Main application configuration"""
    subject: SubjectConfig
    audit: AuditConfig
    adequacy: AdequacyConfig
    ui: UIConfig
    debug_mode: bool = False
    cache_enabled: bool = True
    cache_dir: Optional[str] = None
    log_dir: Optional[str] = None
    external_adapters: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.subject, SubjectConfig):
            self.subject = SubjectConfig(**self.subject)
        if not isinstance(self.audit, AuditConfig):
            self.audit = AuditConfig(**self.audit)
        if not isinstance(self.adequacy, AdequacyConfig):
            self.adequacy = AdequacyConfig(**self.adequacy)
        if not isinstance(self.ui, UIConfig):
            self.ui = UIConfig(**self.ui)

    def subject_settings(self) -> SubjectSettings:
        return SubjectSettings(suite_timeout=float(self.subject.suite_timeout),
                               test_timeout=float(self.subject.test_timeout), fuel=int(self.subject.fuel))

    def round_config(self) -> RoundConfig:
        return RoundConfig(rounds=int(self.audit.rounds),
                           parallelism_schedule=tuple(int(level) for level in self.audit.parallel_schedule),
                           suite_timeout=float(self.subject.suite_timeout),
                           test_timeout=float(self.subject.test_timeout))


SECTIONS = (('subject', SubjectConfig), ('audit', AuditConfig), ('adequacy', AdequacyConfig), ('ui', UIConfig))


def _filter_dataclass_keys(cls, data):
    if not isinstance(data, dict):
        return {}
    valid_keys = cls.__dataclass_fields__.keys()
    unknown = set(data) - set(valid_keys)
    if unknown:
        logger.warning(f"Ignoring unknown configuration keys in {cls.__name__}: {', '.join(sorted(unknown))}")
    return {k: v for k, v in data.items() if k in valid_keys}


class ConfigManager:
    """Manages application configuration"""

    def __init__(self, config_dir: Optional[str] = None):
        if config_dir:
            self.config_dir = Path(config_dir)
        elif os.environ.get(CONFIG_DIR_ENV):
            self.config_dir = Path(os.environ[CONFIG_DIR_ENV])
        else:
            self.config_dir = Path.home() / '.config' / 'defect-audit'

        self.config_file = self.config_dir / 'config.yaml'
        self.config_file_json = self.config_dir / 'config.json'

        self._config = None
        self._load_config()

    def _load_config(self) -> None:
        """Load configuration from file, YAML first, then JSON"""
        config_file = None
        config_data = None

        try:
            if self.config_file.exists():
                config_file = self.config_file
                with open(config_file, 'r', encoding='utf-8') as f:
                    config_data = yaml.safe_load(f)
            elif self.config_file_json.exists():
                config_file = self.config_file_json
                with open(config_file, 'r', encoding='utf-8') as f:
                    config_data = json.load(f)
        except (OSError, yaml.YAMLError, json.JSONDecodeError) as e:
            logger.error(f"Error reading config {config_file}: {e}")
            config_data = None

        if not config_data:
            logger.debug("No configuration file found, using defaults")
            self._config = self._get_default_config()
            return

        try:
            for section_name, cls in SECTIONS:
                config_data[section_name] = _filter_dataclass_keys(cls, config_data.get(section_name, {}))
            filtered_app_data = _filter_dataclass_keys(AppConfig, config_data)
            self._config = AppConfig(**filtered_app_data)
            logger.info(f"Loaded configuration from {config_file}")
        except (TypeError, ValueError) as e:
            logger.error(f"Error parsing configuration: {e}; using defaults")
            self._config = self._get_default_config()

    def _get_default_config(self) -> AppConfig:
        return AppConfig(subject=SubjectConfig(), audit=AuditConfig(), adequacy=AdequacyConfig(), ui=UIConfig())

    def save_config(self, format: str = 'yaml') -> bool:
        """Save configuration to file"""
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            config_dict = asdict(self._config)
            if format.lower() == 'yaml':
                config_file = self.config_file
                with open(config_file, 'w', encoding='utf-8') as f:
                    yaml.safe_dump(config_dict, f, default_flow_style=False, indent=2)
            else:
                config_file = self.config_file_json
                with open(config_file, 'w', encoding='utf-8') as f:
                    json.dump(config_dict, f, indent=2)
        except OSError as e:
            logger.error(f"Error saving configuration: {e}")
            return False
        logger.info(f"Configuration saved to {config_file}")
        return True

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation"""
        value = self._config
        for k in key.split('.'):
            if hasattr(value, k):
                value = getattr(value, k)
            elif isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def set(self, key: str, value: Any) -> bool:
        """Set configuration value using dot notation; only existing keys may be set"""
        keys = key.split('.')
        obj = self._config
        for k in keys[:-1]:
            if not hasattr(obj, k):
                logger.error(f"Invalid configuration key: {key}")
                return False
            obj = getattr(obj, k)
        if isinstance(obj, dict):
            obj[keys[-1]] = value
            return True
        if keys[-1] not in getattr(obj, '__dataclass_fields__', {}):
            logger.error(f"Invalid configuration key: {key}")
            return False
        setattr(obj, keys[-1], value)
        return True

    def get_all(self) -> Dict[str, Any]:
        return asdict(self._config)

    def get_section(self, section: str) -> Optional[Dict[str, Any]]:
        value = getattr(self._config, section, None)
        if value is None or not hasattr(value, '__dataclass_fields__'):
            return None
        return asdict(value)

    def reset_to_defaults(self) -> bool:
        self._config = self._get_default_config()
        logger.info("Configuration reset to defaults")
        return True

    @property
    def config(self) -> AppConfig:
        return self._config

    def validate_config(self) -> List[str]:
        """Validate configuration and return list of issues"""
        issues = []
        subject = self._config.subject
        if subject.suite_timeout <= 0:
            issues.append("subject.suite_timeout must be positive")
        if subject.test_timeout <= 0:
            issues.append("subject.test_timeout must be positive")
        if subject.fuel <= 0:
            issues.append("subject.fuel must be positive")
        if subject.isolation not in ISOLATION_MODES:
            issues.append(f"subject.isolation must be one of {list(ISOLATION_MODES)}")

        audit = self._config.audit
        if audit.rounds < 1:
            issues.append("audit.rounds must be at least 1")
        if not audit.parallel_schedule or any(int(level) < 1 for level in audit.parallel_schedule):
            issues.append("audit.parallel_schedule must be a non-empty list of levels >= 1")

        adequacy = self._config.adequacy
        if not 0.0 <= adequacy.threshold <= 1.0:
            issues.append("adequacy.threshold must lie in [0, 1]")
        if adequacy.cap < 0:
            issues.append("adequacy.cap must not be negative")
        if adequacy.budget_seconds < 0:
            issues.append("adequacy.budget_seconds must not be negative")
        if adequacy.per_variant_timeout <= 0:
            issues.append("adequacy.per_variant_timeout must be positive")
        if adequacy.workers < 1:
            issues.append("adequacy.workers must be at least 1")

        valid_formats = ['table', 'json', 'csv']
        if self._config.ui.default_output_format not in valid_formats:
            issues.append(f"ui.default_output_format must be one of {valid_formats}")
        if not isinstance(self._config.external_adapters, dict):
            issues.append("external_adapters must map adapter ids to command lines")
        return issues
