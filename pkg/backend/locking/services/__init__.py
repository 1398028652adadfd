# Locking services
from .keys import KeyVector, LockedCircuit, LockScheme, key_input_prefix
from .key_gates import insert_key_gates, default_order
from .point_functions import lock_antisat, lock_caslock, lock_sfll_hd
from .apply_key import apply_key
from .key_file import KeyFile, read_key_file, write_key_file

__all__ = [
    'KeyVector', 'LockedCircuit', 'LockScheme', 'key_input_prefix',
    'insert_key_gates', 'default_order',
    'lock_antisat', 'lock_caslock', 'lock_sfll_hd',
    'apply_key',
    'KeyFile', 'read_key_file', 'write_key_file',
]
