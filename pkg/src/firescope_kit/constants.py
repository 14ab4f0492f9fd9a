from pathlib import Path

# Dataset curation
DEFAULT_TILE_SIZE = 341
DEFAULT_CELL_DEG = 5.0
DEFAULT_PIXEL_SIZE_M = 30.0
MIN_EVENT_AREA_KM2 = 5.0
ORDINAL_LEVELS = 10
CLIMATE_VARIABLES = (
    "temperature",
    "precipitation",
    "humidity",
    "wind_speed",
    "wind_direction",
)
CLIMATE_MONTHS = 12
CLIMATE_DIM = len(CLIMATE_VARIABLES) * CLIMATE_MONTHS

# Metrics
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = 1e-4
SSIM_C2 = 9e-4
ECE_BINS = 15
IOU_THRESHOLD = 0.5

# GRPO / reward
ACC_WEIGHT = 0.9
FMT_WEIGHT = 0.1
CLIP_EPSILON = 0.2
KL_COEFF = 0.01
ZERO_STD = 1e-8
FINAL_ANSWER_MARKER = "FINAL ANSWER:"

# Raster loss
SSIM_LOSS_WEIGHT = 0.5
EDGE_LOSS_WEIGHT = 0.2
SMOOTH_L1_BETA = 1.0

# Files
CONTAINER_MAGIC = b"FSKR1"
CONTAINER_SUFFIX = ".fsr"
MAX_HEADER_BYTES = 64 * 1024
REPORT_SCHEMA_VERSION = "1.0"
MANIFEST_SCHEMA_VERSION = "1.0"

# Runtime
DEFAULT_JOBS = 1
DEFAULT_SEED = 0
JOBS_ENV_VAR = "FSK_JOBS"
CONFIG_PATH = Path.home() / ".config" / "fsk" / "config.json"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
