# core/settings.py
import os
from dotenv import load_dotenv

load_dotenv()

# --------------------------------------------------
# Configuration
# --------------------------------------------------
LOG_LEVEL = os.getenv("FOLDING_LOG_LEVEL", "INFO").upper()
FLOAT_TOLERANCE = float(os.getenv("FOLDING_FLOAT_TOLERANCE", 1e-10))
RBAR_DIVISOR = int(os.getenv("FOLDING_RBAR_DIVISOR", 96))
TAIL_DEPTH = int(os.getenv("FOLDING_TAIL_DEPTH", 24))
SAMPLE_DIVISOR = int(os.getenv("FOLDING_SAMPLE_DIVISOR", 64))
ORACLE_GRID_CAP = int(os.getenv("FOLDING_ORACLE_GRID_CAP", 256))
QUAD_LIMIT = int(os.getenv("FOLDING_QUAD_LIMIT", 200))
LAMBDA_BITS = int(os.getenv("FOLDING_LAMBDA_BITS", 256))

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCHEME_DIR = os.getenv("FOLDING_SCHEME_DIR", os.path.join(PROJECT_ROOT, "data", "schemes"))
SCHEMES_CONFIG = os.getenv("FOLDING_SCHEMES_CONFIG", os.path.join(PROJECT_ROOT, "config", "schemes_config.json"))
