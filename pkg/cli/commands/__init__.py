from .simulate import simulate_command
from .verify import verify_command
from .scenario import scenario_gen_command, report_command
from .sweep import sweep_command


def register_commands(cli):
    cli.add_command(simulate_command)
    cli.add_command(verify_command)
    cli.add_command(scenario_gen_command)
    cli.add_command(report_command)
    cli.add_command(sweep_command)
