from .dataset import DigitSplits, MissingDataError, load_dataset
from .harness import AttackConfig, evaluate_encrypted, run_attack, train_baseline
from .model import NormStats, SmallCNN, evaluate, train_cnn

__version__ = "0.1.0"
