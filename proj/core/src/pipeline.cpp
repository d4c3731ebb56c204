#include "cloze/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "cloze/csv.hpp"
#include "cloze/errors.hpp"
#include "cloze/journal.hpp"
#include "cloze/text.hpp"

namespace cloze {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t effective_jobs(std::size_t jobs) {
    if (jobs != 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs work(i) for i in [0, n) across `jobs` threads, then hands results to
// consume(i, result) on the calling thread in index order, batch by batch.
// Keeps artifact bytes independent of the thread count.
template <typename Result, typename Work, typename Consume>
void parallel_ordered(std::size_t n, std::size_t jobs, Work&& work, Consume&& consume) {
    jobs = effective_jobs(jobs);
    const std::size_t batch_size = std::max<std::size_t>(jobs * 4, 1);
    std::vector<Result> results;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t end = std::min(n, start + batch_size);
        results.assign(end - start, Result{});
        std::atomic<std::size_t> next{start};
        auto runner = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= end) break;
                results[i - start] = work(i);
            }
        };
        std::vector<std::thread> threads;
        const std::size_t extra = std::min(jobs, end - start) - 1;
        threads.reserve(extra);
        for (std::size_t t = 0; t < extra; ++t) threads.emplace_back(runner);
        runner();
        for (auto& t : threads) t.join();
        for (std::size_t i = start; i < end; ++i) consume(i, results[i - start]);
    }
}

void ensure_out_dir(const fs::path& out_dir) {
    if (out_dir.empty()) throw ConfigError("--out-dir is required");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir.string() + ": " +
                              ec.message());
}

json base_config_json(const std::string& subcommand, const RunConfig& c) {
    return json{
        {"subcommand", subcommand},
        {"input", c.input.string()},
        {"out_dir", c.out_dir.string()},
        {"delimiter", std::string(1, c.delimiter)},
        {"seed", c.seed},
        {"jobs", c.jobs},
    };
}

json analyze_config_json(const RunConfig& c) {
    json j = base_config_json("analyze-convergence", c);
    j["rounds"] = c.rounds;
    j["slope_threshold"] = c.criterion.slope_threshold;
    j["window"] = c.criterion.window;
    j["consecutive"] = c.criterion.consecutive;
    j["min_responses"] = c.filter.min_responses;
    j["normalize_human"] = c.normalize_human;
    j["dump_trajectories"] = c.dump_trajectories;
    return j;
}

json llm_config_json(const RunConfig& c) {
    json j = base_config_json("llm-entropy", c);
    j["method"] = c.method;
    j["prompt"] = c.prompt_spec;
    j["backend_url"] = c.backend_url;
    j["model"] = c.model;
    j["dump_file"] = c.dump_file.string();
    j["temperature"] = c.generation.temperature;
    j["max_tokens"] = c.generation.max_tokens;
    j["top_logprobs"] = c.generation.top_logprobs;
    j["n_samples"] = c.generation.n_samples;
    j["stop_sequences"] = c.generation.stop_sequences;
    return j;
}

json compare_config_json(const RunConfig& c) {
    json j = base_config_json("compare", c);
    j["human_csv"] = c.human_csv.string();
    j["model_jsonl"] = c.model_jsonl.string();
    j["model_name"] = c.model_name;
    j["dataset_name"] = c.dataset_name;
    j["subsample_n"] = c.subsample_n ? json(*c.subsample_n) : json(nullptr);
    j["converged_only"] = c.converged_only;
    return j;
}

// Audit sidecar: every artifact records the full effective configuration.
void write_sidecar(const fs::path& artifact, const json& config) {
    std::ofstream out(artifact.string() + ".meta.json");
    out << config.dump(2) << '\n';
}

std::ofstream open_artifact(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

PromptTemplate resolve_prompt(const std::string& spec) {
    if (spec == "1") return PromptTemplate::prompt1();
    if (spec == "2") return PromptTemplate::prompt2();
    return PromptTemplate::from_file(spec);
}

std::string sanitize_tag(std::string s) {
    for (char& ch : s) {
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    }
    return s;
}

}  // namespace

// ---- analyze-convergence -----------------------------------------------------

namespace {

struct SentenceAnalysis {
    ConvergenceResult convergence;
    MeanTrajectory mean;
    std::string trajectory_rows;  // pre-rendered dump lines, empty unless dumping
};

SentenceAnalysis analyze_sentence(const EncodedResponses& enc, const RunConfig& config) {
    BootstrapConfig bcfg{config.rounds, config.seed};
    SentenceAnalysis out;
    out.mean.sentence_id = enc.sentence_id;
    out.mean.mean_h.assign(enc.n, 0.0);

    if (config.dump_trajectories) {
        std::string& rows = out.trajectory_rows;
        for_each_trajectory_row(enc, bcfg, [&](std::size_t r, std::span<const double> row) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out.mean.mean_h[i] += row[i];
                rows += enc.sentence_id;
                rows += ',';
                rows += std::to_string(r);
                rows += ',';
                rows += std::to_string(i + 1);
                rows += ',';
                rows += csv::format_double(row[i]);
                rows += '\n';
            }
        });
    } else {
        for_each_trajectory_row(enc, bcfg, [&](std::size_t, std::span<const double> row) {
            for (std::size_t i = 0; i < row.size(); ++i) out.mean.mean_h[i] += row[i];
        });
    }
    const double inv_rounds = 1.0 / static_cast<double>(config.rounds);
    for (double& v : out.mean.mean_h) v *= inv_rounds;

    out.convergence = find_convergence_lenient(out.mean, config.criterion);
    return out;
}

}  // namespace

int run_analyze_convergence(const RunConfig& config) {
    if (config.rounds == 0) throw ConfigError("--rounds must be >= 1");
    if (config.filter.min_responses == 0) throw ConfigError("--min-responses must be >= 1");
    if (config.criterion.slope_threshold <= 0) throw ConfigError("--slope-threshold must be > 0");
    if (config.criterion.window == 0 || config.criterion.consecutive == 0)
        throw ConfigError("--window and --consecutive must be >= 1");
    ensure_out_dir(config.out_dir);

    IngestResult ingest = ingest_csv(config.input, config.delimiter);
    auto groups = group_records(ingest.records);
    std::vector<EncodedResponses> corpus;
    corpus.reserve(groups.size());
    const auto norm = config.normalize_human ? ResponseNormalization::kFull
                                             : ResponseNormalization::kLowerTrim;
    for (const auto& group : groups) corpus.push_back(encode(group, norm));
    FilterOutcome filtered = apply_filter(std::move(corpus), config.filter);

    const json cfg_json = analyze_config_json(config);

    auto exclusions = open_artifact(config.out_dir / "exclusions.csv");
    exclusions << "sentence_id,n_responses,reason\n";
    for (const auto& ex : filtered.excluded) {
        csv::write_row(exclusions,
                       {ex.sentence_id, std::to_string(ex.n_responses), ex.reason});
    }
    exclusions.close();
    write_sidecar(config.out_dir / "exclusions.csv", cfg_json);

    auto conv_csv = open_artifact(config.out_dir / "convergence.csv");
    conv_csv << "sentence_id,n_responses,final_entropy_bits,converged,convergence_n,reason\n";
    auto mean_csv = open_artifact(config.out_dir / "mean_trajectories.csv");
    mean_csv << "sentence_id,step,mean_entropy_bits\n";
    auto scatter_csv = open_artifact(config.out_dir / "convergence_scatter.csv");
    scatter_csv << "sentence_id,convergence_n,final_entropy_bits\n";
    std::ofstream traj_csv;
    if (config.dump_trajectories) {
        traj_csv = open_artifact(config.out_dir / "trajectories.csv");
        traj_csv << "sentence_id,round,step,entropy_bits\n";
    }

    std::vector<ConvergenceResult> results;
    results.reserve(filtered.kept.size());

    parallel_ordered<SentenceAnalysis>(
        filtered.kept.size(), config.jobs,
        [&](std::size_t i) { return analyze_sentence(filtered.kept[i], config); },
        [&](std::size_t, SentenceAnalysis& analysis) {
            const auto& r = analysis.convergence;
            csv::write_row(conv_csv,
                           {r.sentence_id, std::to_string(r.n_responses),
                            csv::format_double(r.final_entropy_bits),
                            r.converged ? "true" : "false",
                            r.convergence_n ? std::to_string(*r.convergence_n) : "",
                            r.reason});
            for (std::size_t t = 1; t <= analysis.mean.size(); ++t) {
                csv::write_row(mean_csv, {r.sentence_id, std::to_string(t),
                                          csv::format_double(analysis.mean.at_step(t))});
            }
            if (r.converged) {
                csv::write_row(scatter_csv,
                               {r.sentence_id, std::to_string(*r.convergence_n),
                                csv::format_double(r.final_entropy_bits)});
            }
            if (config.dump_trajectories) traj_csv << analysis.trajectory_rows;
            results.push_back(r);
        });

    conv_csv.close();
    mean_csv.close();
    scatter_csv.close();
    write_sidecar(config.out_dir / "convergence.csv", cfg_json);
    write_sidecar(config.out_dir / "mean_trajectories.csv", cfg_json);
    write_sidecar(config.out_dir / "convergence_scatter.csv", cfg_json);
    if (config.dump_trajectories) {
        traj_csv.close();
        write_sidecar(config.out_dir / "trajectories.csv", cfg_json);
    }

    json summary;
    summary["n_rows"] = ingest.records.size();
    summary["skipped_empty_rows"] = ingest.skipped_empty;
    summary["n_sentences_ingested"] = groups.size();
    summary["n_sentences_excluded"] = filtered.excluded.size();
    summary["n_sentences_analyzed"] = results.size();
    if (!results.empty()) {
        CorpusConvergenceSummary s = summarize_corpus(results);
        summary["n_converged"] = s.n_converged;
        summary["pct_converged"] = s.pct_converged;
        json quantiles = json::array();
        for (const auto& qp : s.quantiles) {
            quantiles.push_back({{"q", qp.q}, {"n", qp.n}});
        }
        summary["quantiles"] = quantiles;
        json bands = json::array();
        for (const auto& band : s.bands) {
            bands.push_back({{"label", band.label},
                             {"n_sentences", band.n_sentences},
                             {"mean_convergence_n", band.mean_convergence_n}});
        }
        summary["bands"] = bands;
        double mean_n = 0.0, mean_h = 0.0;
        for (const auto& r : results) {
            mean_n += static_cast<double>(r.n_responses);
            mean_h += r.final_entropy_bits;
        }
        summary["mean_responses_per_sentence"] = mean_n / static_cast<double>(results.size());
        summary["mean_final_entropy_bits"] = mean_h / static_cast<double>(results.size());
    }
    {
        auto out = open_artifact(config.out_dir / "convergence_summary.json");
        out << summary.dump(2) << '\n';
    }
    write_sidecar(config.out_dir / "convergence_summary.json", cfg_json);
    return kExitOk;
}

// ---- llm-entropy ---------------------------------------------------------------

namespace {

struct LlmOutcome {
    bool attempted = false;
    bool ok = false;
    std::string fail_reason;
    json record;
};

json distribution_json(const WordDistribution& dist) {
    json entries = json::object();
    for (const auto& [word, p] : dist.entries) entries[word] = p;
    return entries;
}

int finish_llm_run(const RunConfig& config, const std::string& tag,
                   const std::vector<LlmOutcome>& outcomes, bool backend_down) {
    const json cfg_json = llm_config_json(config);
    const fs::path out_path = config.out_dir / ("llm_entropy_" + tag + ".jsonl");
    const fs::path manifest_path = config.out_dir / ("llm_failures_" + tag + ".json");

    auto out = open_artifact(out_path);
    json failed = json::array();
    for (const auto& outcome : outcomes) {
        if (!outcome.attempted) continue;
        if (outcome.ok) {
            out << outcome.record.dump() << '\n';
        } else if (!backend_down) {
            failed.push_back({{"sentence_id", outcome.record.value("sentence_id", "")},
                              {"reason", outcome.fail_reason}});
        }
    }
    out.close();
    write_sidecar(out_path, cfg_json);

    {
        auto manifest = open_artifact(manifest_path);
        manifest << json{{"failed", failed}}.dump(2) << '\n';
    }
    write_sidecar(manifest_path, cfg_json);

    if (backend_down) return kExitBackendFailure;
    return failed.empty() ? kExitOk : kExitPartialFailure;
}

}  // namespace

int run_llm_entropy(const RunConfig& config, PredictionBackend* backend) {
    ensure_out_dir(config.out_dir);
    if (config.generation.temperature <= 0) throw ConfigError("--temperature must be > 0");
    if (config.generation.max_tokens < 1) throw ConfigError("--max-tokens must be >= 1");
    if (config.generation.top_logprobs < 1) throw ConfigError("--top-logprobs must be >= 1");
    if (config.generation.n_samples < 1) throw ConfigError("--n-samples must be >= 1");

    if (config.method == "dump") {
        if (config.dump_file.empty()) throw ConfigError("--dump-file is required for --method dump");
        auto records = read_topk_dump(config.dump_file);
        std::vector<LlmOutcome> outcomes(records.size());
        for (std::size_t i = 0; i < records.size(); ++i) {
            auto& outcome = outcomes[i];
            outcome.attempted = true;
            outcome.record["sentence_id"] = records[i].sentence_id;
            try {
                DistributionWithEntropy result = topk_dump_entropy(records[i]);
                outcome.ok = true;
                outcome.record = {{"sentence_id", records[i].sentence_id},
                                  {"method", to_string(DistributionSource::kTopkDump)},
                                  {"prompt_id", "none"},
                                  {"entropy_bits", result.entropy},
                                  {"distribution", distribution_json(result.dist)},
                                  {"dropped_mass", result.dist.dropped_mass},
                                  {"dropped_count", result.dist.dropped_count}};
            } catch (const AllTokensFilteredError& e) {
                outcome.fail_reason = e.what();
            }
        }
        return finish_llm_run(config, "dump", outcomes, false);
    }

    if (config.method != "logit" && config.method != "sample")
        throw ConfigError("--method must be one of logit|sample|dump");

    PromptTemplate prompt = resolve_prompt(config.prompt_spec);
    prompt.validate();
    const std::string prompt_tag = to_string(prompt.id);
    const std::string tag = config.method + "_" + sanitize_tag(prompt_tag);

    std::unique_ptr<OpenAiClient> owned_client;
    if (backend == nullptr) {
        if (config.backend_url.empty())
            throw ConfigError("--backend-url is required for --method " + config.method);
        OpenAiClient::Options options;
        options.base_url = config.backend_url;
        options.api_token = backend_token_from_env();
        options.initial_backoff_ms = config.backoff_ms;
        owned_client = std::make_unique<OpenAiClient>(options);
        backend = owned_client.get();
    }

    IngestResult ingest = ingest_csv(config.input, config.delimiter);
    auto groups = group_records(ingest.records);
    ProgressJournal journal(config.out_dir / ("llm_journal_" + tag + ".jsonl"));

    std::atomic<bool> backend_down{false};
    std::vector<LlmOutcome> outcomes(groups.size());

    parallel_ordered<int>(
        groups.size(), config.jobs,
        [&](std::size_t i) -> int {
            if (backend_down.load()) return 0;
            const auto& group = groups[i];
            auto& outcome = outcomes[i];
            outcome.attempted = true;
            outcome.record["sentence_id"] = group.sentence_id;
            try {
                if (config.method == "logit") {
                    std::vector<TokenPrediction> preds;
                    if (const auto* cached = journal.logit_predictions(group.sentence_id)) {
                        preds = *cached;
                    } else {
                        ChatRequest request;
                        request.model = config.model;
                        request.system_message = prompt.system_message;
                        request.user_message = prompt.render(group.context);
                        request.temperature = config.generation.temperature;
                        request.max_tokens = config.generation.max_tokens;
                        request.logprobs = true;
                        request.top_logprobs = config.generation.top_logprobs;
                        ChatResponse response = backend->complete(request);
                        if (response.first_position_top_logprobs.empty())
                            throw LogprobsUnavailableError();
                        preds = response.first_position_top_logprobs;
                        journal.record_logit(group.sentence_id, preds);
                    }
                    WordDistribution dist = aggregate_tokens(
                        std::span<const TokenPrediction>(preds), DistributionSource::kLogit);
                    outcome.record = {{"sentence_id", group.sentence_id},
                                      {"method", to_string(DistributionSource::kLogit)},
                                      {"prompt_id", prompt_tag},
                                      {"entropy_bits", distribution_entropy(dist)},
                                      {"distribution", distribution_json(dist)},
                                      {"dropped_mass", dist.dropped_mass},
                                      {"dropped_count", dist.dropped_count}};
                    outcome.ok = true;
                } else {
                    for (int s = 0; s < config.generation.n_samples; ++s) {
                        if (journal.has_sample(group.sentence_id, s)) continue;
                        if (backend_down.load()) return 0;
                        std::string text = sample_completion(*backend, config.model,
                                                             group.context, prompt,
                                                             config.generation);
                        journal.record_sample(group.sentence_id, s, text);
                    }
                    std::vector<std::string> samples;
                    samples.reserve(static_cast<std::size_t>(config.generation.n_samples));
                    auto recorded = journal.samples(group.sentence_id);
                    for (int s = 0; s < config.generation.n_samples; ++s) {
                        samples.push_back(recorded.at(s));
                    }
                    SampleAggregation agg =
                        aggregate_samples(std::span<const std::string>(samples));
                    outcome.record = {{"sentence_id", group.sentence_id},
                                      {"method", to_string(DistributionSource::kSampling)},
                                      {"prompt_id", prompt_tag},
                                      {"entropy_bits", agg.entropy},
                                      {"distribution", distribution_json(agg.dist)},
                                      {"dropped_mass", agg.dist.dropped_mass},
                                      {"dropped_count", agg.dropped_count},
                                      {"multiword_count", agg.multiword_count}};
                    outcome.ok = true;
                }
            } catch (const BackendError& e) {
                if (e.status() == 0) {
                    backend_down.store(true);
                    outcome.attempted = false;
                } else {
                    outcome.fail_reason = e.what();
                }
            } catch (const std::exception& e) {
                outcome.fail_reason = e.what();
            }
            return 0;
        },
        [](std::size_t, int&) {});

    return finish_llm_run(config, tag, outcomes, backend_down.load());
}

// ---- compare -------------------------------------------------------------------

std::vector<HumanEntropyRow> read_convergence_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ConfigError(path.string() + " is empty");

    long id_col = -1, n_col = -1, h_col = -1, conv_col = -1, cn_col = -1, reason_col = -1;
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
        const std::string& name = header->fields[i];
        long idx = static_cast<long>(i);
        if (name == "sentence_id") id_col = idx;
        else if (name == "n_responses") n_col = idx;
        else if (name == "final_entropy_bits") h_col = idx;
        else if (name == "converged") conv_col = idx;
        else if (name == "convergence_n") cn_col = idx;
        else if (name == "reason") reason_col = idx;
    }
    if (id_col < 0) throw MissingColumnError("sentence_id");
    if (h_col < 0) throw MissingColumnError("final_entropy_bits");

    std::vector<HumanEntropyRow> rows;
    while (auto row = reader.next()) {
        if (row->fields.size() == 1 && row->fields[0].empty()) continue;
        auto field = [&](long col) -> std::string {
            return (col >= 0 && static_cast<std::size_t>(col) < row->fields.size())
                       ? row->fields[static_cast<std::size_t>(col)]
                       : std::string();
        };
        HumanEntropyRow r;
        r.sentence_id = field(id_col);
        try {
            r.final_entropy_bits = std::stod(field(h_col));
            if (n_col >= 0 && !field(n_col).empty())
                r.n_responses = static_cast<std::size_t>(std::stoull(field(n_col)));
            if (cn_col >= 0 && !field(cn_col).empty())
                r.convergence_n = static_cast<std::size_t>(std::stoull(field(cn_col)));
        } catch (const std::exception&) {
            throw MalformedRowError(row->line_no, "unparseable numeric field");
        }
        r.converged = field(conv_col) == "true";
        r.reason = field(reason_col);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ModelEntropyRecord> read_entropy_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<ModelEntropyRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("sentence_id") ||
            !j.contains("entropy_bits"))
            throw MalformedRowError(line_no, "bad entropy JSONL record");
        ModelEntropyRecord rec;
        rec.sentence_id = j["sentence_id"].get<std::string>();
        rec.entropy_bits = j["entropy_bits"].get<double>();
        rec.method = j.value("method", "unknown");
        rec.prompt_id = j.value("prompt_id", "unknown");
        rec.dropped_mass = j.value("dropped_mass", 0.0);
        rec.dropped_count = j.value("dropped_count", std::size_t{0});
        records.push_back(std::move(rec));
    }
    return records;
}

int run_compare(const RunConfig& config) {
    ensure_out_dir(config.out_dir);
    auto human_rows = read_convergence_csv(config.human_csv);
    if (config.converged_only) {
        std::erase_if(human_rows, [](const HumanEntropyRow& r) { return !r.converged; });
    }
    if (human_rows.empty()) throw EmptyInputError("no usable rows in " + config.human_csv.string());

    auto model_records = read_entropy_jsonl(config.model_jsonl);
    if (model_records.empty())
        throw EmptyInputError("no records in " + config.model_jsonl.string());

    // group model records by (method, prompt_id), preserving appearance order
    std::vector<std::pair<std::string, std::vector<const ModelEntropyRecord*>>> groups;
    for (const auto& rec : model_records) {
        const std::string key = rec.method + "\t" + rec.prompt_id;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == key; });
        if (it == groups.end()) {
            groups.push_back({key, {}});
            it = std::prev(groups.end());
        }
        it->second.push_back(&rec);
    }

    std::vector<std::pair<std::string, double>> human;
    human.reserve(human_rows.size());
    for (const auto& r : human_rows) human.push_back({r.sentence_id, r.final_entropy_bits});

    const json cfg_json = compare_config_json(config);
    const fs::path report_path = config.out_dir / "alignment_report.csv";
    auto report_csv = open_artifact(report_path);
    report_csv << "model,dataset,prompt_id,method,bias,mae,ccc,n\n";

    for (const auto& [key, records] : groups) {
        const std::string method = records.front()->method;
        const std::string prompt_id = records.front()->prompt_id;

        std::vector<std::pair<std::string, double>> model;
        model.reserve(records.size());
        for (const auto* rec : records) model.push_back({rec->sentence_id, rec->entropy_bits});

        PairedEntropies paired = pair_by_id(human, model);
        if (config.subsample_n) {
            paired = subsample_matched(paired, *config.subsample_n, config.seed);
        }
        AlignmentReport report = alignment_report(paired);

        csv::write_row(report_csv,
                       {config.model_name, config.dataset_name, prompt_id, method,
                        csv::format_double(report.bias), csv::format_double(report.mae),
                        csv::format_double(report.ccc), std::to_string(report.n)});

        // identity-line scatter with the extreme-error sentences flagged
        std::size_t max_idx = 0, min_idx = 0;
        for (std::size_t i = 0; i < paired.pairs.size(); ++i) {
            const double err = paired.pairs[i].h_model - paired.pairs[i].h_human;
            const double err_max = paired.pairs[max_idx].h_model - paired.pairs[max_idx].h_human;
            const double err_min = paired.pairs[min_idx].h_model - paired.pairs[min_idx].h_human;
            if (err > err_max) max_idx = i;
            if (err < err_min) min_idx = i;
        }
        const fs::path scatter_path =
            config.out_dir /
            ("compare_scatter_" + sanitize_tag(method) + "_" + sanitize_tag(prompt_id) + ".csv");
        auto scatter = open_artifact(scatter_path);
        scatter << "sentence_id,h_human,h_model,error,flag\n";
        for (std::size_t i = 0; i < paired.pairs.size(); ++i) {
            const auto& p = paired.pairs[i];
            std::string flag;
            if (i == max_idx) flag = "largest_positive";
            else if (i == min_idx) flag = "largest_negative";
            csv::write_row(scatter, {p.sentence_id, csv::format_double(p.h_human),
                                     csv::format_double(p.h_model),
                                     csv::format_double(p.h_model - p.h_human), flag});
        }
        scatter.close();
        write_sidecar(scatter_path, cfg_json);
    }
    report_csv.close();
    write_sidecar(report_path, cfg_json);
    return kExitOk;
}

// ---- report --------------------------------------------------------------------

int run_report(const RunConfig& config) {
    ensure_out_dir(config.out_dir);
    json report;

    const fs::path summary_path = config.out_dir / "convergence_summary.json";
    if (fs::exists(summary_path)) {
        std::ifstream in(summary_path);
        json summary;
        in >> summary;
        report["convergence"] = summary;
    }

    const fs::path alignment_path = config.out_dir / "alignment_report.csv";
    if (fs::exists(alignment_path)) {
        std::ifstream in(alignment_path, std::ios::binary);
        csv::Reader reader(in);
        auto header = reader.next();
        json rows = json::array();
        while (auto row = reader.next()) {
            if (!header || row->fields.size() != header->fields.size()) continue;
            json obj;
            for (std::size_t i = 0; i < row->fields.size(); ++i) {
                obj[header->fields[i]] = row->fields[i];
            }
            rows.push_back(obj);
        }
        report["alignment"] = rows;
    }

    if (report.empty())
        throw ConfigError("no artifacts found in " + config.out_dir.string() +
                          "; run analyze-convergence and/or compare first");

    {
        auto out = open_artifact(config.out_dir / "report.json");
        out << report.dump(2) << '\n';
    }
    write_sidecar(config.out_dir / "report.json", base_config_json("report", config));

    if (report.contains("convergence")) {
        const auto& c = report["convergence"];
        std::cout << "convergence: " << c.value("n_sentences_analyzed", 0) << " sentences, "
                  << c.value("pct_converged", 0.0) << "% converged\n";
        if (c.contains("quantiles")) {
            for (const auto& qp : c["quantiles"]) {
                std::cout << "  " << 100.0 * qp.value("q", 0.0) << "% of converged sentences by n="
                          << qp.value("n", 0) << "\n";
            }
        }
    }
    if (report.contains("alignment")) {
        std::cout << "alignment rows:\n";
        for (const auto& row : report["alignment"]) {
            std::cout << "  " << row.value("model", "") << " " << row.value("dataset", "") << " "
                      << row.value("prompt_id", "") << "/" << row.value("method", "")
                      << " bias=" << row.value("bias", "") << " mae=" << row.value("mae", "")
                      << " ccc=" << row.value("ccc", "") << " n=" << row.value("n", "") << "\n";
        }
    }
    return kExitOk;
}

// ---- driver --------------------------------------------------------------------

namespace {

void write_error_json(const RunConfig& config, const std::string& kind,
                      const std::string& message) {
    json err = {{"error", kind}, {"message", message}};
    std::cerr << err.dump() << '\n';
    if (config.out_dir.empty()) return;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) return;
    std::ofstream out(config.out_dir / "error.json");
    if (out) out << err.dump(2) << '\n';
}

}  // namespace

int run_subcommand(const std::string& name, const RunConfig& config,
                   PredictionBackend* backend) {
    try {
        if (name == "analyze-convergence") return run_analyze_convergence(config);
        if (name == "llm-entropy") return run_llm_entropy(config, backend);
        if (name == "compare") return run_compare(config);
        if (name == "report") return run_report(config);
        throw ConfigError("unknown subcommand: " + name);
    } catch (const ConfigError& e) {
        write_error_json(config, "config", e.what());
        return kExitConfigError;
    } catch (const BackendError& e) {
        write_error_json(config, "backend", e.what());
        return kExitBackendFailure;
    } catch (const Error& e) {
        write_error_json(config, "data", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        write_error_json(config, "internal", e.what());
        return kExitConfigError;
    }
}

}  // namespace cloze
