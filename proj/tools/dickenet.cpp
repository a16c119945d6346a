#include "dickenet/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
	using namespace dickenet;

	CLI::App app{"Networked Dicke-ensemble clocks under gravity: simulation, preparation and self-checks"};
	app.require_subcommand(1);

	cli::RunOptions options;
	std::uint64_t seed = 0;
	std::string config;

	const auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "override the config rng_seed"); };

	auto* simulate = app.add_subcommand("simulate", "run the Ramsey protocol for a scenario");
	simulate->add_option("config", config, "scenario YAML")->required();
	add_seed(simulate);

	auto* prepare = app.add_subcommand("prepare", "optimize a variational preparation circuit");
	prepare->add_option("config", config, "scenario YAML")->required();
	add_seed(prepare);

	auto* aci = app.add_subcommand("aci", "atom-clock interferometer beat and visibility");
	aci->add_option("config", config, "scenario YAML")->required();
	add_seed(aci);

	std::string parameter;
	std::vector<std::string> values;
	auto* scan = app.add_subcommand("scan", "sweep one parameter and fit decoherence envelopes");
	scan->add_option("config", config, "scenario YAML")->required();
	scan->add_option("--param", parameter, "alpha, N, delta_z or T_max")->required();
	scan->add_option("--values", values, "values, comma separated or repeated")->delimiter(',');
	add_seed(scan);

	cli::VerifyOptions verify_options;
	bool full = false;
	bool list_mutations = false;
	std::string mutation;
	std::string report;
	auto* verify = app.add_subcommand("verify", "run the oracle and identity self-checks");
	verify->add_flag("--full", full, "larger systems and more random draws");
	verify->add_option("--mutate", mutation, "plant a named fault in the analytic signals");
	verify->add_flag("--list-mutations", list_mutations, "print the available faults");
	verify->add_option("--report", report, "also write the report to a file");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::ParseError& e)
	{
		const int code = app.exit(e);
		return code == 0 ? 0 : cli::exit_config_error;
	}

	const auto seeded = [&](CLI::App* sub) {
		if(sub->count("--seed") > 0)
			options.seed = seed;
	};

	if(*simulate)
	{
		seeded(simulate);
		return cli::cmd_simulate(config, options);
	}
	if(*prepare)
	{
		seeded(prepare);
		return cli::cmd_prepare(config, options);
	}
	if(*aci)
	{
		seeded(aci);
		return cli::cmd_aci(config, options);
	}
	if(*scan)
	{
		seeded(scan);
		return cli::cmd_scan(config, parameter, values, options);
	}
	if(list_mutations)
	{
		for(const auto& name : mutation_names())
			std::cout << name << '\n';
		return cli::exit_ok;
	}
	verify_options.level = full ? VerifyLevel::full : VerifyLevel::fast;
	if(!mutation.empty())
		verify_options.mutation = mutation;
	if(!report.empty())
		verify_options.report_path = report;
	return cli::cmd_verify(verify_options, options);
}
