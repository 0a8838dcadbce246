# =============================================================================
# nfadlab
#
# UTILITY SUB-MODULES
# =============================================================================

# Local import
from . import custom_logging
from . import misc

# Reimports
from .misc import DocEnum, format_si

# =============================================================================
