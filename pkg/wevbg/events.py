"""
Progress events.

Long-running loops (block training, frame segmentation, drift steps,
Monte-Carlo trials) publish progress through an ``Events`` emitter so that
callers can observe them without the numerical code knowing about logging
or user interfaces.

Example:
    >>> from wevbg.events import Events, BLOCK_TRAINED
    >>> events = Events()
    >>> events.on(BLOCK_TRAINED, lambda event: print(event.payload['index']))
    >>> events.emit(BLOCK_TRAINED, index=0, origin=(0, 0))
    0
"""

BLOCK_TRAINED = 'block_trained'
FRAME_SEGMENTED = 'frame_segmented'
DRIFT_STEP = 'drift_step'
TRIAL_DONE = 'trial_done'


class Event:
    """
    A progress notification.

    Attributes:
        name: The event name (one of the module constants)
        payload: Dict of event-specific values
    """
    def __init__(self, name, payload):
        self.name = name
        self.payload = payload

    def __repr__(self):
        return f"Event({self.name!r}, {self.payload!r})"


class CallbackList(list):
    """
    A list of listeners that can be fired with one event.
    """
    def fire(self, event):
        """
        Call every listener with the event, in subscription order.

        Args:
            event: The Event to deliver
        """
        for listener in list(self):
            listener(event)


class Events:
    """
    Event emitter for progress reporting.

    Listeners receive a single ``Event`` argument.
    """
    def __init__(self):
        """Initialize a new Events instance with an empty listener registry."""
        self.listeners = {}

    def on(self, event_name, callback=None):
        """
        Subscribe to an event.

        Args:
            event_name: The name of the event to listen for
            callback: The function to call with the Event
        """
        if callback is None:
            return
        if event_name not in self.listeners:
            self.listeners[event_name] = CallbackList()
        self.listeners[event_name].append(callback)

    def emit(self, event_name, **payload):
        """
        Publish an event to its listeners.

        Args:
            event_name: The name of the event
            **payload: Values carried by the Event
        """
        if event_name not in self.listeners:
            return
        self.listeners[event_name].fire(Event(event_name, payload))

    def reset(self):
        """Remove all event listeners."""
        self.listeners = {}


def emit(events, event_name, **payload):
    """Emit on ``events`` when it is not None."""
    if events is not None:
        events.emit(event_name, **payload)
