#include "dickenet/commands.hpp"

#include "dickenet/serialize.hpp"
#include "dickenet/varprep.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace dickenet::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

/// Raised for non-finite or otherwise unusable numerical results.
class NumericFailure : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

std::ostream& out_of(const RunOptions& o)
{
	return o.out ? *o.out : std::cout;
}

std::ostream& err_of(const RunOptions& o)
{
	return o.err ? *o.err : std::cerr;
}

/// Collects the files of one run and publishes them with a single rename.
class RunDirectory
{
public:
	explicit RunDirectory(fs::path target) : target_{std::move(target)}
	{
		const fs::path parent = target_.parent_path().empty() ? fs::path(".") : target_.parent_path();
		fs::create_directories(parent);
		staging_ = parent / ("." + target_.filename().string() + ".tmp-" + std::to_string(::getpid()));
		fs::remove_all(staging_);
		fs::create_directories(staging_);
	}

	void write(const std::string& name, const std::string& content)
	{
		std::ofstream os(staging_ / name, std::ios::binary);
		os << content;
		if(!os)
			throw std::runtime_error("cannot write " + (staging_ / name).string());
		files_.push_back(name);
	}

	RunDirectory(const RunDirectory&) = delete;
	RunDirectory& operator=(const RunDirectory&) = delete;

	// A run that throws before commit leaves nothing behind.
	~RunDirectory()
	{
		if(!committed_)
		{
			std::error_code ec;
			fs::remove_all(staging_, ec);
		}
	}

	[[nodiscard]] const std::vector<std::string>& files() const { return files_; }

	/// Writes the manifest last, then moves the staging directory into place.
	void commit(const json& manifest)
	{
		std::ofstream os(staging_ / "manifest.json", std::ios::binary);
		os << manifest.dump(2) << '\n';
		os.close();
		if(!os)
			throw std::runtime_error("cannot write manifest");
		fs::remove_all(target_);
		fs::rename(staging_, target_);
		committed_ = true;
	}

private:
	fs::path target_;
	fs::path staging_;
	std::vector<std::string> files_;
	bool committed_ = false;
};

std::string num(double x)
{
	return format_real(x);
}

std::string csv_header(const std::string& command, const ScenarioConfig& c)
{
	return "# dickenet " + command + " name=" + c.name + " hash=" + parameter_hash(c) + '\n';
}

std::string trace_csv(const std::string& header, const InterferenceTrace& t)
{
	std::string s = header + "T_seconds,I\n";
	for(std::size_t i = 0; i < t.times.size(); ++i)
		s += num(t.times[i]) + ',' + num(t.signal[i]) + '\n';
	return s;
}

void require_finite(const InterferenceTrace& t, const char* what)
{
	for(const double v : t.signal)
		if(!std::isfinite(v))
			throw NumericFailure(std::string("non-finite value in ") + what + " trace");
}

json check_json(const CheckResult& c)
{
	return {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
}

CheckResult round_trip_check(const ScenarioConfig& c)
{
	bool ok = false;
	try
	{
		ok = parse_scenario(echo_scenario(c)) == c;
	}
	catch(const ConfigError&)
	{
	}
	return {"config_round_trip", ok, ok ? "echo re-parses to an equal config" : "echo does not re-parse"};
}

json base_manifest(const std::string& command, const ScenarioConfig& c, double seconds,
                   const std::vector<CheckResult>& checks, const std::vector<std::string>& files)
{
	json j;
	j["command"] = command;
	j["artifact_version"] = artifact_version;
	j["parameter_hash"] = parameter_hash(c);
	j["config_echo"] = echo_scenario(c);
	j["wall_clock_seconds"] = seconds;
	j["checks"] = json::array();
	for(const auto& ch : checks)
		j["checks"].push_back(check_json(ch));
	j["files"] = files;
	return j;
}

json metrics_json(const ScenarioMetrics& m)
{
	json j;
	j["leakage"] = m.leakage;
	j["vacuum_fidelity"] = m.vacuum_fidelity;
	j["delta_e_joules"] = m.delta_e;
	j["tau_predicted"] = m.tau_predicted ? json(*m.tau_predicted) : json(nullptr);
	if(m.envelope)
		j["envelope_fit"] = {{"tau", m.envelope->tau},
		                     {"points", m.envelope->points},
		                     {"rms_residual", m.envelope->rms_residual}};
	else
		j["envelope_fit"] = nullptr;
	j["revival"] = {{"detected", m.revival.detected},
	                {"onset_time", m.revival.onset_time},
	                {"trough", m.revival.trough},
	                {"peak", m.revival.peak}};
	if(m.peak)
		j["dominant_frequency"] = {{"omega", m.peak->omega},
		                           {"amplitude", m.peak->amplitude},
		                           {"residual_rms", m.peak->residual_rms}};
	else
		j["dominant_frequency"] = nullptr;
	return j;
}

ScenarioConfig load_with_overrides(const std::string& path, const RunOptions& o)
{
	ScenarioConfig c = load_scenario(path);
	if(o.seed)
		c.rng_seed = *o.seed;
	return c;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Maps exceptions to exit codes, printing a one-line diagnostic.
template <class Fn>
int guarded(const RunOptions& o, Fn&& fn)
{
	try
	{
		return fn();
	}
	catch(const ConfigError& e)
	{
		err_of(o) << "config error: " << e.what() << '\n';
		return exit_config_error;
	}
	catch(const UnsupportedConfiguration& e)
	{
		err_of(o) << "config error: " << e.what() << '\n';
		return exit_config_error;
	}
	catch(const std::exception& e)
	{
		err_of(o) << "numeric failure: " << e.what() << '\n';
		return exit_numeric_failure;
	}
}

std::string profile_csv(const std::string& header, const RealVector& w)
{
	std::string s = header + "l,weight\n";
	for(Eigen::Index l = 0; l < w.size(); ++l)
		s += std::to_string(l) + ',' + num(w[l]) + '\n';
	return s;
}

std::string circuit_text(const ScenarioConfig& c, const OptimizationResult& r)
{
	const auto& v = std::get<VariationalSpec>(c.state);
	const EnsembleDims dims(c.atoms);
	CircuitRecord rec;
	rec.atoms = c.atoms;
	rec.ansatz = r.ansatz;
	rec.cost = r.cost;
	rec.seed = c.rng_seed;
	rec.cost_spec = CostSpec::target_distribution(v.target.build(dims), v.lambda, v.target.label());
	std::ostringstream os;
	write_circuit(os, rec);
	return os.str();
}

} // namespace

fs::path output_root()
{
	if(const char* env = std::getenv(output_root_env); env && *env)
		return env;
	return fs::current_path();
}

fs::path run_directory(const ScenarioConfig& config)
{
	return output_root() / config.output;
}

RealVector local_profile(const PreparedScenario& prepared)
{
	const ComplexVector u1 = prepared.u_p.matrix().col(1);
	return u1.cwiseAbs2();
}

ScenarioRun run_scenario(const ScenarioConfig& config)
{
	PreparedScenario prepared = prepare_state(config);
	const RamseyScenario scenario = make_ramsey(config, prepared);
	RamseyResult result = run_ramsey(scenario, config.path);
	if(result.analytic)
		require_finite(*result.analytic, "analytic");
	if(result.oracle)
		require_finite(*result.oracle, "oracle");
	InterferenceTrace trace = result.analytic ? *result.analytic : *result.oracle;

	ScenarioMetrics m;
	m.leakage = result.leakage;
	m.vacuum_fidelity = std::norm(prepared.u_p.matrix()(0, 0));
	RealVector w = local_profile(prepared);
	w[0] = 0.0;
	const double total = w.sum();
	if(total > 0.0)
	{
		w /= total;
		const RealVector l = RealVector::LinSpaced(w.size(), 0.0, double(w.size() - 1));
		const double mean = w.dot(l);
		const double var = w.dot(l.cwiseProduct(l)) - mean * mean;
		m.delta_e = config.gravity.hbar * config.gravity.omega_eg * std::sqrt(std::max(0.0, var));
	}
	if(m.delta_e > 0.0)
		m.tau_predicted = decoherence_time(config.gravity, m.delta_e);
	try
	{
		m.envelope = envelope_fit(trace);
	}
	catch(const std::domain_error&)
	{
	}
	m.revival = detect_revival(trace);
	try
	{
		m.peak = dominant_frequency(trace);
	}
	catch(const std::exception&)
	{
	}
	return {std::move(prepared), std::move(result), std::move(trace), m};
}

int cmd_simulate(const std::string& config_path, const RunOptions& o)
{
	return guarded(o, [&] {
		const auto start = std::chrono::steady_clock::now();
		const ScenarioConfig c = load_with_overrides(config_path, o);
		for(const auto& w : c.gravity.warnings())
			err_of(o) << "warning: " << w << '\n';
		const ScenarioRun run = run_scenario(c);
		const std::string header = csv_header("simulate", c);

		std::vector<CheckResult> checks{round_trip_check(c)};
		RunDirectory dir(run_directory(c));
		dir.write("trace.csv", trace_csv(header, run.trace));
		if(run.result.analytic && run.result.oracle)
		{
			std::string s = header + "T_seconds,I_analytic,I_oracle,abs_diff\n";
			const auto& a = *run.result.analytic;
			const auto& b = *run.result.oracle;
			for(std::size_t i = 0; i < a.times.size(); ++i)
				s += num(a.times[i]) + ',' + num(a.signal[i]) + ',' + num(b.signal[i]) + ',' +
				     num(std::abs(a.signal[i] - b.signal[i])) + '\n';
			dir.write("comparison.csv", s);
			// the closed forms hold on the ideal sector only
			const double tol = 1e-9;
			if(run.result.leakage < 1e-10)
				checks.push_back({"analytic_vs_oracle", run.result.max_abs_diff < tol,
				                  "max |diff| " + num(run.result.max_abs_diff)});
			else
				checks.push_back({"analytic_vs_oracle", true,
				                  "not applicable, leakage " + num(run.result.leakage) + ", max |diff| " +
				                      num(run.result.max_abs_diff)});
		}
		dir.write("profile.csv", profile_csv(header, local_profile(run.prepared)));
		if(run.prepared.optimization)
			dir.write("circuit.txt", circuit_text(c, *run.prepared.optimization));

		json manifest = base_manifest("simulate", c, seconds_since(start), checks, dir.files());
		manifest["metrics"] = metrics_json(run.metrics);
		dir.commit(manifest);

		out_of(o) << "wrote " << run_directory(c).string() << '\n';
		for(const auto& ch : checks)
			if(!ch.passed)
				return int(exit_verify_failed);
		return int(exit_ok);
	});
}

int cmd_prepare(const std::string& config_path, const RunOptions& o)
{
	return guarded(o, [&] {
		const auto start = std::chrono::steady_clock::now();
		const ScenarioConfig c = load_with_overrides(config_path, o);
		if(!std::holds_alternative<VariationalSpec>(c.state))
			throw ConfigError("prepare needs a variational state");
		const PreparedScenario prepared = prepare_state(c);
		const OptimizationResult& r = *prepared.optimization;
		if(!std::isfinite(r.cost))
			throw NumericFailure("optimizer returned a non-finite cost");
		const std::string header = csv_header("prepare", c);
		const auto& v = std::get<VariationalSpec>(c.state);
		const DickeState target = v.target.build(EnsembleDims(c.atoms));

		RunDirectory dir(run_directory(c));
		dir.write("circuit.txt", circuit_text(c, r));

		const RealVector got = local_profile(prepared);
		std::string md = header + "l,target,prepared\n";
		for(int l = 0; l <= c.atoms; ++l)
			md += std::to_string(l) + ',' + num(std::norm(target[l])) + ',' + num(got[l]) + '\n';
		dir.write("mass_distribution.csv", md);

		std::string tr = header + "iteration,cost\n";
		for(std::size_t i = 0; i < r.trace.size(); ++i)
			tr += std::to_string(i) + ',' + num(r.trace[i]) + '\n';
		dir.write("cost_trace.csv", tr);

		std::string rs = header + "restart,cost,evaluations,aborted\n";
		for(const auto& rec : r.restarts)
			rs += std::to_string(rec.index) + ',' + num(rec.cost) + ',' + std::to_string(rec.evaluations) + ',' +
			      (rec.aborted ? "1" : "0") + '\n';
		dir.write("restarts.csv", rs);

		const double vac = std::norm(prepared.u_p.matrix()(0, 0));
		const double leakage = extract_excitation_profile(prepared.state).leakage;
		json manifest = base_manifest("prepare", c, seconds_since(start), {round_trip_check(c)}, dir.files());
		manifest["metrics"] = {{"cost", r.cost},
		                       {"best_restart", r.best_restart},
		                       {"vacuum_fidelity", vac},
		                       {"leakage", leakage},
		                       {"target_fidelity", fidelity(target, DickeState::normalized(
		                                                                prepared.u_p.matrix().col(1)))}};
		dir.commit(manifest);
		out_of(o) << "wrote " << run_directory(c).string() << " (cost " << num(r.cost) << ", vacuum fidelity "
		          << num(vac) << ")\n";
		return int(exit_ok);
	});
}

int cmd_aci(const std::string& config_path, const RunOptions& o)
{
	return guarded(o, [&] {
		const auto start = std::chrono::steady_clock::now();
		const ScenarioConfig c = load_with_overrides(config_path, o);
		if(!c.aci)
			throw ConfigError("aci needs an 'aci' section");
		const AciParams params = AciParams::from_excitations(c.aci->l_up, c.aci->l_down, c.gravity);
		const std::vector<double> times = linear_grid(c.time.start, c.time.stop, c.time.steps);
		const InterferenceTrace trace = aci_interference(params, c.gravity, times);
		require_finite(trace, "aci");
		const std::vector<double> vis = aci_visibility(trace, c.aci->window);
		const std::string header = csv_header("aci", c);

		RunDirectory dir(run_directory(c));
		dir.write("trace.csv", trace_csv(header, trace));
		std::string s = header + "T_seconds,V\n";
		double vmin = 1e300, vmax = -1e300;
		for(std::size_t i = 0; i < times.size(); ++i)
		{
			s += num(times[i]) + ',' + num(vis[i]) + '\n';
			vmin = std::min(vmin, vis[i]);
			vmax = std::max(vmax, vis[i]);
		}
		dir.write("visibility.csv", s);
		json manifest = base_manifest("aci", c, seconds_since(start), {round_trip_check(c)}, dir.files());
		manifest["metrics"] = {{"visibility_min", vmin},
		                       {"visibility_max", vmax},
		                       {"effective_mass", params.mass},
		                       {"internal_omega", params.internal_omega}};
		dir.commit(manifest);
		out_of(o) << "wrote " << run_directory(c).string() << '\n';
		return int(exit_ok);
	});
}

int cmd_scan(const std::string& config_path, const std::string& parameter, const std::vector<std::string>& values,
             const RunOptions& o)
{
	return guarded(o, [&] {
		const auto start = std::chrono::steady_clock::now();
		if(values.empty())
			throw ConfigError("scan needs at least one value");
		if(parameter != "alpha" && parameter != "N" && parameter != "delta_z" && parameter != "T_max")
			throw ConfigError("scan parameter must be alpha, N, delta_z or T_max");
		const ScenarioConfig base = load_with_overrides(config_path, o);

		std::vector<ScenarioConfig> points;
		for(const std::string& text : values)
		{
			ScenarioConfig c = base;
			const Angle a = Angle::parse(text);
			if(parameter == "alpha")
			{
				auto* e = std::get_if<ExactSpec>(&c.state);
				if(!e || e->kind != ExactSpec::Kind::psi_alpha)
					throw ConfigError("alpha scans need an exact psi_alpha state");
				e->alpha = a;
			}
			else if(parameter == "N")
			{
				if(a.value != std::round(a.value) || a.value < 1)
					throw ConfigError("N values must be positive integers, got '" + text + "'");
				c.atoms = int(a.value);
			}
			else if(parameter == "delta_z")
			{
				if(c.gravity.potentials)
					throw ConfigError("delta_z scans need default potentials");
				c.gravity.delta_z = a.value;
			}
			else
				c.time.stop = a.value;
			c.output = base.output + "/point_" + std::to_string(points.size());
			c.validate();
			points.push_back(std::move(c));
		}

		const std::string header = csv_header("scan", base);
		RunDirectory dir(run_directory(base));
		std::string summary =
		    header + "index,value,value_text,tau_fit,tau_predicted,rel_error,fit_points,revival_detected\n";
		for(std::size_t i = 0; i < points.size(); ++i)
		{
			const ScenarioConfig& c = points[i];
			const ScenarioRun run = run_scenario(c);
			dir.write("trace_" + std::to_string(i) + ".csv", trace_csv(csv_header("scan", c), run.trace));
			const auto& m = run.metrics;
			std::string fit = "nan", pred = "nan", rel = "nan", npts = "0";
			if(m.envelope)
			{
				fit = num(m.envelope->tau);
				npts = std::to_string(m.envelope->points);
			}
			if(m.tau_predicted)
				pred = num(*m.tau_predicted);
			if(m.envelope && m.tau_predicted)
				rel = num((m.envelope->tau - *m.tau_predicted) / *m.tau_predicted);
			summary += std::to_string(i) + ',' + num(Angle::parse(values[i]).value) + ',' + values[i] + ',' + fit +
			           ',' + pred + ',' + rel + ',' + npts + ',' + (m.revival.detected ? "1" : "0") + '\n';
		}
		dir.write("summary.csv", summary);
		json manifest = base_manifest("scan", base, seconds_since(start), {round_trip_check(base)}, dir.files());
		manifest["scan"] = {{"parameter", parameter}, {"values", values}};
		dir.commit(manifest);
		out_of(o) << "wrote " << run_directory(base).string() << '\n';
		return int(exit_ok);
	});
}

int cmd_verify(const VerifyOptions& v, const RunOptions& o)
{
	try
	{
		const SignalHooks hooks = v.mutation ? mutated_hooks(*v.mutation) : SignalHooks{};
		const VerifyReport report = run_verify(v.level, hooks);
		const std::string text = report.render();
		out_of(o) << text;
		if(v.report_path)
		{
			std::ofstream os(*v.report_path, std::ios::binary);
			os << text;
			if(!os)
			{
				err_of(o) << "cannot write report to " << *v.report_path << '\n';
				return exit_numeric_failure;
			}
		}
		if(!report.all_passed())
		{
			for(const auto& c : report.checks)
				if(!c.passed)
					err_of(o) << "failed: " << c.name << '\n';
			return exit_verify_failed;
		}
		return exit_ok;
	}
	catch(const std::invalid_argument& e)
	{
		err_of(o) << "config error: " << e.what() << '\n';
		return exit_config_error;
	}
}

} // namespace dickenet::cli
