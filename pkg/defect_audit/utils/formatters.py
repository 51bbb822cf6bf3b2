"""
Formatting and output utilities
"""

import csv
import json
import logging
import re
import sys
from io import StringIO
from typing import Any, Dict, List, Optional

from colorama import Fore, Style
from dateutil.relativedelta import relativedelta
from tabulate import tabulate

_color_enabled = True

_DURATION_RE = re.compile(r'(\d+(?:\.\d+)?)([hms])')
_UNIT_SECONDS = {'h': 3600.0, 'm': 60.0, 's': 1.0}


def setup_logging(debug: bool = False) -> None:
    """Setup logging configuration"""
    level = logging.DEBUG if debug else logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )


def set_color_output(enabled: bool) -> None:
    global _color_enabled
    _color_enabled = enabled


def _paint(color: str, text: str) -> str:
    if not _color_enabled:
        return text
    return f"{color}{text}{Style.RESET_ALL}"


def print_success(message: str) -> None:
    """Print success message in green"""
    print(_paint(Fore.GREEN, f"✓ {message}"))


def print_error(message: str) -> None:
    """Print error message in red"""
    print(_paint(Fore.RED, f"✗ {message}"), file=sys.stderr)


def print_info(message: str) -> None:
    print(_paint(Fore.CYAN, f"ℹ {message}"))


def print_warning(message: str) -> None:
    """Print warning message in yellow"""
    print(_paint(Fore.YELLOW, f"⚠ {message}"))


def print_header(message: str) -> None:
    print(_paint(Fore.BLUE, f"━━━ {message} ━━━"))


def print_section(title: str) -> None:
    """Print section title"""
    print(_paint(Fore.BLUE, f"\n▶ {title}"))
    print(_paint(Fore.BLUE, '─' * (len(title) + 4)))


def format_output(data: List[Dict[str, Any]],
                  format_type: str = 'table',
                  headers: Optional[List[str]] = None,
                  tablefmt: str = 'grid') -> str:
    """
    Format data for output

    Args:
        data: List of dictionaries to format
        format_type: Output format ('table', 'json', 'csv')
        headers: Column headers; defaults to the keys of the first row
        tablefmt: Table format for tabulate

    Returns:
        Formatted string
    """
    if not data:
        return "No data found"

    headers = headers or list(data[0].keys())

    if format_type == 'json':
        return json.dumps(data, indent=2, default=str)

    if format_type == 'csv':
        output = StringIO()
        writer = csv.DictWriter(output, fieldnames=headers, extrasaction='ignore')
        writer.writeheader()
        for row in data:
            writer.writerow(row)
        return output.getvalue().strip()

    if format_type == 'table':
        table_data = [[row.get(header, '') for header in headers] for row in data]
        return tabulate(table_data, headers=headers, tablefmt=tablefmt)

    raise ValueError(f"Unsupported format type: {format_type}")


def print_key_value_pairs(data: Dict[str, Any], title: str = "") -> None:
    """Print key-value pairs, one level of nesting expanded"""
    if title:
        print_section(title)

    for key, value in data.items():
        if isinstance(value, dict):
            print(_paint(Fore.BLUE, f"{key}:"))
            for sub_key, sub_value in value.items():
                print(f"  {sub_key}: {sub_value}")
        else:
            print(f"{_paint(Fore.BLUE, f'{key}:')} {value}")


def parse_duration(text: str) -> float:
    """
    Parse a duration such as "0s", "60s", "90", "3h" or "1h30m" into seconds

    Raises:
        ValueError: if the text is not a duration
    """
    text = text.strip().lower()
    if not text:
        raise ValueError("empty duration")
    try:
        value = float(text)
    except ValueError:
        pass
    else:
        if value < 0:
            raise ValueError(f"negative duration: {text}")
        return value

    position, total = 0, 0.0
    for match in _DURATION_RE.finditer(text):
        if match.start() != position:
            break
        total += float(match.group(1)) * _UNIT_SECONDS[match.group(2)]
        position = match.end()
    if position != len(text):
        raise ValueError(f"invalid duration: {text!r} (expected e.g. 60s, 3h, 1h30m)")
    return total


def format_duration(seconds: float) -> str:
    """Render seconds as e.g. '1h 30m', '45s' or '1.5s' (one decimal below 10s)"""
    if seconds < 10:
        return f"{round(seconds, 1):g}s"
    delta = relativedelta(seconds=int(round(seconds))).normalized()
    parts = []
    if delta.days:
        parts.append(f"{delta.days}d")
    if delta.hours:
        parts.append(f"{delta.hours}h")
    if delta.minutes:
        parts.append(f"{delta.minutes}m")
    if delta.seconds or not parts:
        parts.append(f"{delta.seconds}s")
    return ' '.join(parts)
