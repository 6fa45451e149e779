"""
Training event manager

Sessions emit run_started, epoch_completed, early_stopped, run_completed and
run_diverged; handlers registered here turn them into progress logs or
collect them for inspection.
"""

import logging
from collections import deque
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)

EVENT_TYPES = (
    "run_started",
    "epoch_completed",
    "early_stopped",
    "run_completed",
    "run_diverged",
)

Handler = Callable[[Dict[str, Any]], None]


class TrainingEventManager:
    """Synchronous dispatch of training events with a bounded history"""

    def __init__(self, max_history: int = 1000):
        self.event_handlers: Dict[str, List[Handler]] = {}
        self.event_history: deque = deque(maxlen=max_history)

    def register_handler(self, event_type: str, handler: Handler):
        """
        Register an event handler

        Args:
            event_type: one of EVENT_TYPES, or "*" for every event
            handler: callable receiving the event dict
        """
        if event_type != "*" and event_type not in EVENT_TYPES:
            raise ValueError(f"Unknown event type {event_type!r}")
        self.event_handlers.setdefault(event_type, []).append(handler)
        logger.debug(f"Registered handler for event type: {event_type}")

    def unregister_handler(self, event_type: str, handler: Handler):
        if handler in self.event_handlers.get(event_type, []):
            self.event_handlers[event_type].remove(handler)

    def emit(self, event_type: str, data: Dict[str, Any]) -> Dict[str, Any]:
        event = {
            "type": event_type,
            "data": data,
            "timestamp": datetime.now().isoformat(),
        }
        self.event_history.append(event)

        for key in (event_type, "*"):
            for handler in self.event_handlers.get(key, []):
                try:
                    handler(event)
                except Exception as e:
                    logger.error(f"Error in {key} handler: {e}")
        return event

    def get_event_history(
        self, event_type: Optional[str] = None, limit: int = 100
    ) -> List[Dict[str, Any]]:
        """Most recent events, optionally of one type"""
        if event_type:
            return [e for e in self.event_history if e["type"] == event_type][-limit:]
        return list(self.event_history)[-limit:]

    def get_event_statistics(self) -> Dict[str, Any]:
        stats: Dict[str, Any] = {
            "total_events": len(self.event_history),
            "event_types": {},
            "most_recent_event": self.event_history[-1] if self.event_history else None,
        }
        for event in self.event_history:
            stats["event_types"][event["type"]] = stats["event_types"].get(event["type"], 0) + 1
        return stats

    def clear(self):
        self.event_handlers.clear()
        self.event_history.clear()


def progress_logger(every: int = 10, log: Optional[logging.Logger] = None) -> Handler:
    """Handler logging one INFO line every `every` epochs"""
    log = log or logger

    def handler(event: Dict[str, Any]):
        data = event["data"]
        if event["type"] == "epoch_completed" and data["epoch"] % every == 0:
            log.info(
                f"epoch {data['epoch']:4d}  train_loss={data['train_loss']:.4f}  "
                f"val_loss={data['val_loss']:.4f}  val_acc={data['val_accuracy']:.4f}"
            )
        elif event["type"] == "early_stopped":
            log.info(f"Early stop at epoch {data['epoch']}, best epoch {data['best_epoch']}")
        elif event["type"] == "run_completed":
            log.info(f"Test accuracy {data['test_accuracy']:.4f} after {data['epochs']} epochs")

    return handler
