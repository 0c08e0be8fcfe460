"""Synchronous publish/subscribe hub."""

import logging

logger = logging.getLogger(__name__)


class Subscription:
    def __init__(self, hub, topic, callback):
        self.hub = hub
        self.topic = topic
        self.callback = callback
        self.active = True

    def cancel(self):
        if self.active:
            self.hub._remove(self.topic, self)
            self.active = False

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.cancel()
        return False


class EventHub:
    """Dispatches events to topic subscribers in registration order."""

    def __init__(self, strict=False):
        self._topics = {}
        self.strict = strict

    def subscribe(self, topic, callback):
        subscription = Subscription(self, topic, callback)
        self._topics.setdefault(topic, []).append(subscription)
        return subscription

    def _remove(self, topic, subscription):
        listeners = self._topics.get(topic, [])
        if subscription in listeners:
            listeners.remove(subscription)

    def publish(self, topic, payload=None):
        delivered = 0
        for subscription in list(self._topics.get(topic, [])):
            if not subscription.active:
                continue
            try:
                subscription.callback(payload)
            except Exception:
                logger.exception("subscriber for %s failed", topic)
                if self.strict:
                    raise
            else:
                delivered += 1
        return delivered

    def topics(self):
        return sorted(name for name, subs in self._topics.items() if subs)
