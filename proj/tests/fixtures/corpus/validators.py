"""Declarative field validators."""

import re


class ValidationError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def required(field):
    """Reject None and empty strings."""
    def check(value):
        if value is None or value == "":
            raise ValidationError(field, "is required")
        return value
    return check


def ranged(field, low=None, high=None):
    def check(value):
        if low is not None and value < low:
            raise ValidationError(field, f"must be >= {low}")
        if high is not None and value > high:
            raise ValidationError(field, f"must be <= {high}")
        return value
    return check


def matches(field, pattern, flags=0):
    compiled = re.compile(pattern, flags)

    def check(value):
        if not compiled.fullmatch(str(value)):
            raise ValidationError(field, f"must match {pattern!r}")
        return value

    return check


class Schema:
    """Maps field names to a chain of validators."""

    def __init__(self, **fields):
        self.fields = fields

    def validate(self, record):
        cleaned = {}
        errors = []
        for name, checks in self.fields.items():
            value = record.get(name)
            try:
                for check in checks:
                    value = check(value)
            except ValidationError as exc:
                errors.append(exc)
                continue
            cleaned[name] = value
        if errors:
            raise ValidationError("schema", "; ".join(e.message for e in errors))
        return cleaned

    def partial(self, record):
        known = {k: v for k, v in record.items() if k in self.fields}
        return self.validate(known) if known else {}
