"""distbandit: collaborative best-arm identification under limited communication.

k simulated players pull arms of a shared bandit instance and coordinate
through synchronous broadcast rounds.  The library provides the one-round
vote strategies, the multi-round elimination strategies, the classic
baselines, and a reproducible Monte-Carlo harness with a CLI front end.
"""

from .algorithms import (
    ALGORITHM_NAMES,
    RunOutcome,
    VoteBoard,
    amplification_copies,
    amplify,
    baseline_full_comm,
    baseline_majority_vote,
    baseline_no_comm,
    cumulative_quota,
    multi_round,
    one_round_best_arm,
    one_round_pac,
    plurality,
    r_round,
    run_algorithm,
    subset_size,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    ExperimentReport,
    budget_calculator,
    generator,
    lower_bound_instance,
    run_sweep,
    run_trials,
    write_sweep_csv,
    write_trials_csv,
)
from .instances import (
    ArmSpec,
    BanditInstance,
    GapProfile,
    draw_reward,
    draw_reward_block,
    draw_reward_sum,
    gaps,
    hardness,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    require_unique_best,
    save_instance,
)
from .protocol import (
    Broadcast,
    CommStats,
    Player,
    PlayerContext,
    ProtocolViolation,
    PullLedger,
    run_synchronous,
)
from .rng import RngStream, TrialStreams, generator_stream
from .serial import (
    ExploreOutcome,
    SerialBudget,
    confidence_radius,
    run_elimination,
    successive_elimination,
)

__version__ = "0.1.0"
