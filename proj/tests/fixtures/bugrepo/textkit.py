"""String helpers used by the report formatter."""


def shout(s):
    return s.upper() + "!"


def whisper(s):
    return s.lower()


def banner(title, width=40):
    pad = max(width - len(title), 0)
    left = pad // 2
    return "=" * left + title + "=" * (pad - left)
