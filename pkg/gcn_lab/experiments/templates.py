"""
Text templates for tables and dataset reports
"""

from dataclasses import dataclass
from typing import Any, Dict, List

from jinja2 import Environment, StrictUndefined


@dataclass
class ReportTemplate:
    """Structure for text templates"""

    name: str
    description: str
    template: str
    required_context: List[str]


class ReportTemplates:
    """Collection of text templates"""

    def __init__(self):
        self.environment = Environment(
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            undefined=StrictUndefined,
        )
        self.templates = self._initialize_templates()

    def _initialize_templates(self) -> Dict[str, ReportTemplate]:
        return {
            "aligned_table": ReportTemplate(
                name="aligned_table",
                description="Fixed-width table, first column left-aligned",
                template="""\
{% if title %}
{{ title }}
{% endif %}
{% for col in columns %}{{ col.ljust(widths[loop.index0]) if loop.first else col.rjust(widths[loop.index0]) }}{% if not loop.last %}  {% endif %}{% endfor %}

{{ "-" * total_width }}
{% for row in rows %}
{% for cell in row %}{{ cell.ljust(widths[loop.index0]) if loop.first else cell.rjust(widths[loop.index0]) }}{% if not loop.last %}  {% endif %}{% endfor %}

{% endfor %}
""",
                required_context=["title", "columns", "rows", "widths", "total_width"],
            ),
            "dataset_stats": ReportTemplate(
                name="dataset_stats",
                description="Summary printed by the validate command",
                template="""\
dataset {{ stats.name }}
nodes={{ stats.nodes }} edges={{ stats.edges }} classes={{ stats.classes }} features={{ stats.features }}
label_mismatch={{ "%.3f"|format(stats.label_mismatch) }} label_ratio={{ "%.3f"|format(stats.label_ratio) }}
{% if reference is none %}
no reference statistics for this dataset
{% elif deviations %}
differs from reference {{ reference.name }}:
{% for cell, pair in deviations.items() %}
  {{ cell }}: expected {{ pair[0] }}, found {{ pair[1] }}
{% endfor %}
{% else %}
matches reference {{ reference.name }}
{% endif %}
""",
                required_context=["stats", "reference", "deviations"],
            ),
        }

    def get_template(self, name: str) -> ReportTemplate:
        if name not in self.templates:
            raise KeyError(f"Unknown template {name!r}")
        return self.templates[name]

    def render(self, name: str, **context: Any) -> str:
        template = self.get_template(name)
        missing = [key for key in template.required_context if key not in context]
        if missing:
            raise ValueError(f"Template {name} is missing context {missing}")
        return self.environment.from_string(template.template).render(**context)


TEMPLATES = ReportTemplates()


def render_aligned_table(columns: List[str], rows: List[List[str]], title: str = "") -> str:
    widths = [len(col) for col in columns]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    total_width = sum(widths) + 2 * (len(widths) - 1)
    return TEMPLATES.render(
        "aligned_table",
        title=title,
        columns=columns,
        rows=rows,
        widths=widths,
        total_width=total_width,
    )
