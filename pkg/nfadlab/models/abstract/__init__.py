# =============================================================================
# nfadlab
#
# ABSTRACT RECORD SUB-MODULES
# =============================================================================

# Reimports
from .record import Record, freeze, to_plain
from .record_metaclass import RecordMetaclass

# =============================================================================
