import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    RING = os.getenv('FREELOOP_RING', 'Z')
    BOUND = int(os.getenv('FREELOOP_BOUND', 6))
    SEED = int(os.getenv('FREELOOP_SEED', 20240601))
    WORKERS = int(os.getenv('FREELOOP_WORKERS', 1))
    CORPUS_DIR = os.getenv('FREELOOP_CORPUS_DIR', os.path.join(os.path.dirname(os.path.abspath(__file__)), 'corpus'))
    OUTPUT_DIR = os.getenv('FREELOOP_OUTPUT_DIR', 'output')
    LOG_LEVEL = os.getenv('FREELOOP_LOG_LEVEL', 'WARNING')

    @classmethod
    def as_dict(cls):
        return {
            'ring': cls.RING,
            'bound': cls.BOUND,
            'seed': cls.SEED,
            'workers': cls.WORKERS,
            'corpus_dir': cls.CORPUS_DIR,
            'output_dir': cls.OUTPUT_DIR,
            'log_level': cls.LOG_LEVEL
        }
