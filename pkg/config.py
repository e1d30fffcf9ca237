import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

TOOL_VERSION = '1.0.0'

# Monte Carlo Configuration
SIMULATION_CONFIG = {
    'reps': int(os.getenv('ORDEXP_REPS', '50000')),
    'seed': int(os.getenv('ORDEXP_SEED', '20240501')),
    'threads': int(os.getenv('ORDEXP_THREADS')) if os.getenv('ORDEXP_THREADS') else None,
    'block_size': int(os.getenv('ORDEXP_BLOCK_SIZE', '2048'))
}

# Verification suite settings
VERIFY_CONFIG = {
    'fast_reps': 10_000,
    'full_reps': 50_000,
    'ks_draws': 10_000,
    'ks_alpha': 0.01,
    'se_multiplier': 3.0,
    'constant_tolerance': 1e-8,
    'n_grid': list(range(2, 31)),
    'p_grid': [-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0]
}

# Result files
OUTPUT_CONFIG = {
    'out_dir': os.getenv('ORDEXP_OUT_DIR', 'results'),
    'manifest_name': 'run_manifest.json',
    'display_decimals': 2,
    'reference_tolerance': 1.5
}

# Logging Configuration
LOG_CONFIG = {
    'level': os.getenv('ORDEXP_LOG_LEVEL', 'INFO'),
    'format': '%(asctime)s - %(levelname)s - %(message)s',
    'log_dir': os.getenv('ORDEXP_LOG_DIR', 'logs')
}
