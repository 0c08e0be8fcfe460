"""Blocking HTTP client facade with retry and backoff policies."""

import json
import random
import time

DEFAULT_TIMEOUT = 30.0
RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})


class HttpError(Exception):
    def __init__(self, status, body=""):
        super().__init__(f"HTTP {status}")
        self.status = status
        self.body = body


class BackoffPolicy:
    def __init__(self, base_delay=0.2, factor=2.0, jitter=0.1, max_delay=10.0):
        self.base_delay = base_delay
        self.factor = factor
        self.jitter = jitter
        self.max_delay = max_delay

    def delay_for(self, attempt):
        """Delay before the given 1-based retry attempt."""
        raw = self.base_delay * (self.factor ** (attempt - 1))
        jittered = raw + random.uniform(0, self.jitter)
        return min(jittered, self.max_delay)


class Client:
    def __init__(self, transport, base_url, policy=None, max_retries=3):
        self.transport = transport
        self.base_url = base_url.rstrip("/")
        self.policy = policy or BackoffPolicy()
        self.max_retries = max_retries

    def request(self, method, path, body=None, headers=None):
        url = self.base_url + path
        last_error = None
        for attempt in range(1, self.max_retries + 2):
            try:
                status, payload = self.transport(method, url, body, headers or {})
            except ConnectionError as exc:
                last_error = exc
            else:
                if status < 400:
                    return payload
                if status not in RETRYABLE_STATUS:
                    raise HttpError(status, payload)
                last_error = HttpError(status, payload)
            if attempt <= self.max_retries:
                time.sleep(self.policy.delay_for(attempt))
        raise last_error

    def get_json(self, path, headers=None):
        payload = self.request("GET", path, headers=headers)
        return json.loads(payload)

    def post_json(self, path, document, headers=None):
        body = json.dumps(document)
        merged = {"Content-Type": "application/json"}
        merged.update(headers or {})
        payload = self.request("POST", path, body=body, headers=merged)
        return json.loads(payload) if payload else None
