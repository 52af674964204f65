"""Subcommands of the ``rimc`` command line"""

from rimc_calibration.commands import (
    cmd_calibrate,
    cmd_cost,
    cmd_deploy,
    cmd_eval,
    cmd_sweep,
    cmd_train_teacher,
)

COMMANDS = (cmd_train_teacher, cmd_deploy, cmd_calibrate, cmd_sweep, cmd_cost, cmd_eval)

__all__ = ["COMMANDS"]
