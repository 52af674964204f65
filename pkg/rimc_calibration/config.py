"""Configuration file for rimc_calibration."""

import os

# --- Device defaults ---
G_MAX_US = float(os.getenv("RIMC_G_MAX_US", 100.0))  # full-scale conductance (µS)

# --- Cost model defaults ---
RRAM_ENDURANCE = int(float(os.getenv("RIMC_RRAM_ENDURANCE", 1e8)))  # write cycles
SRAM_ENDURANCE = int(float(os.getenv("RIMC_SRAM_ENDURANCE", 1e16)))  # write cycles
RRAM_WRITE_NS = float(os.getenv("RIMC_RRAM_WRITE_NS", 100.0))  # per cell write
SRAM_RRAM_SPEED_RATIO = float(os.getenv("RIMC_SRAM_RRAM_SPEED_RATIO", 100.0))

# --- Harness ---
RESULTS_DB_URL = os.getenv("RIMC_RESULTS_DB_URL")  # None -> sqlite file in the output dir
RESULTS_DB_FILENAME = "results.sqlite"
LOG_LEVEL = os.getenv("RIMC_LOG_LEVEL", "INFO")
WORKERS = int(os.getenv("RIMC_WORKERS", 1))

# --- Format versions ---
MODEL_FORMAT_VERSION = 1
MODEL_FILE_MAGIC = b"RIMC-MODEL"
CONFIG_SCHEMA_VERSION = 1

# --- Business Logic Constants ---
PRESETS = ("mlp", "cnn")
METHODS = ("dora", "lora", "backprop")
ADAPTER_KINDS = ("dora", "lora")
DORA_MODES = ("weight_norm", "activation_norm")
OPTIMIZERS = ("sgd", "adam")
RESULT_FORMATS = ("csv", "json-lines")

MLP_HIDDEN = (128, 64)
CNN_CHANNELS = (8, 16)

BN_EPS = 1e-5
INT8_MAX = 127

# --- Calibration defaults ---
CALIB_EPOCHS = 20
CALIB_LOSS_THRESHOLD = 1e-6
CALIB_LR = 1e-3
CALIB_SAMPLES = 10
CALIB_RANK = 4
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8

# --- Reference scale for the cost comparison (ResNet-50 class model) ---
REF_BACKPROP_SAMPLES = 125
REF_BACKPROP_UPDATE_SAMPLES = 120
REF_ADAPTER_SAMPLES = 10
REF_GAMMA_RESNET50_R4 = 0.0234
REF_RESNET50_PARAMS = 25_600_000
