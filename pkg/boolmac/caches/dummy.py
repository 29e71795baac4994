from .base import Base


class Dummy(Base):
    """Store that keeps nothing, every sweep point is simulated again.
    Rows handed to :meth:`set` are still checked for being storable.
    """
