//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ligvec/http_transport.hpp"
#include "ligvec/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ligvec;

namespace {

struct SelectionOpts {
  std::string interactions, gold, sequences;
  bool remove_singletons = false;

  void add(CLI::App *app) {
    app->add_option("--interactions", interactions, "protein\\tligand\\tSMILES table");
    app->add_option("--gold", gold, "protein\\tsccs gold standard; restricts to labelled proteins");
    app->add_option("--sequences", sequences, "FASTA or id\\tsequence file");
    app->add_flag("--remove-singletons", remove_singletons,
                  "drop single-protein families and super-families");
  }
};

struct Loaded {
  std::optional<InteractionTable> interactions;
  std::optional<GoldStandard> gold;
  std::optional<std::map<std::string, std::string>> sequences;
  std::optional<std::set<std::string>> proteins;
};

Loaded load_selection(const SelectionOpts &o, bool sequences_select) {
  Loaded l;
  if (!o.interactions.empty()) l.interactions = io::load_interactions(o.interactions);
  if (!o.gold.empty()) l.gold = io::load_gold_standard(o.gold);
  if (!o.sequences.empty()) l.sequences = io::load_sequences(o.sequences);
  if (l.gold || o.remove_singletons) {
    l.proteins = select_proteins(l.interactions ? &*l.interactions : nullptr,
                                 l.gold ? &*l.gold : nullptr,
                                 sequences_select && l.sequences ? &*l.sequences : nullptr,
                                 o.remove_singletons);
  }
  return l;
}

struct MclOpts {
  MclConfig config;
  void add(CLI::App *app) {
    app->add_option("--inflation", config.inflation, "MCL inflation");
    app->add_option("--expansion", config.expansion, "MCL expansion power");
    app->add_option("--prune", config.prune, "MCL pruning threshold");
    app->add_option("--max-iterations", config.max_iterations, "MCL iteration limit");
    app->add_option("--epsilon", config.epsilon, "MCL convergence tolerance");
  }
};

Orientation orientation(bool lower) {
  return lower ? Orientation::lower_is_similar : Orientation::higher_is_similar;
}

void warn(const std::vector<std::string> &warnings) {
  for (const auto &w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ligvec: ligand-centric protein embeddings, clustering and evaluation"};
  app.require_subcommand(1);

  // fetch
  auto *fetch = app.add_subcommand("fetch", "retrieve ligands for SCOPe domains from web services");
  std::string fetch_domains, fetch_out;
  AcquisitionConfig acq = AcquisitionConfig::from_environment();
  std::size_t fetch_workers = 1;
  fetch->add_option("--domains", fetch_domains, "file with one domain id per line")->required();
  fetch->add_option("--out", fetch_out, "interaction table to write")->required();
  fetch->add_option("--mapping-url", acq.mapping_url, "domain -> UniProt mapping service");
  fetch->add_option("--chembl-url", acq.chembl_url, "ChEMBL REST base URL");
  fetch->add_option("--cache-dir", acq.cache_dir, "response cache directory");
  fetch->add_option("--timeout", acq.timeout_seconds, "request timeout in seconds");
  fetch->add_option("--retries", acq.max_retries, "retries per request");
  fetch->add_option("--workers", fetch_workers, "concurrent proteins");

  // tokenize
  auto *tok = app.add_subcommand("tokenize", "split SMILES or sequences into words or characters");
  std::string tok_kind = "smiles_word", tok_input, tok_out;
  std::size_t tok_k = kDefaultSmilesWordLength;
  SelectionOpts tok_sel;
  tok->add_option("--kind", tok_kind, "smiles_word|smiles_char|protein_word|protein_char");
  tok->add_option("--k", tok_k, "SMILES word length");
  tok->add_option("--input", tok_input, "SMILES corpus or sequence file, one row per entry");
  tok_sel.add(tok);
  tok->add_option("--out", tok_out, "token table to write")->required();

  // train
  auto *tr = app.add_subcommand("train", "train a skip-gram embedding model");
  std::string tr_kind = "smiles_word", tr_corpus, tr_out, tr_tag;
  std::size_t tr_k = kDefaultSmilesWordLength;
  TrainConfig tc;
  SelectionOpts tr_sel;
  tr->add_option("--kind", tr_kind, "smiles_word|smiles_char|protein_word|protein_char");
  tr->add_option("--k", tr_k, "SMILES word length");
  tr->add_option("--corpus", tr_corpus, "training corpus (SMILES per line, or sequences)");
  tr->add_option("--interactions", tr_sel.interactions, "train on ligand SMILES when no corpus");
  tr->add_option("--sequences", tr_sel.sequences, "train on sequences when no corpus");
  tr->add_option("--dim", tc.dimension, "vector dimension");
  tr->add_option("--window", tc.window, "context window");
  tr->add_option("--negatives", tc.negatives, "negative samples per pair");
  tr->add_option("--epochs", tc.epochs, "training epochs");
  tr->add_option("--lr", tc.learning_rate, "initial learning rate");
  tr->add_option("--min-count", tc.min_count, "minimum token count");
  tr->add_option("--subsample", tc.subsample, "frequent-token subsampling threshold (0 = off)");
  tr->add_option("--seed", tc.seed, "random seed");
  tr->add_option("--workers", tc.workers, "training threads");
  tr->add_option("--corpus-tag", tr_tag, "free-form corpus label stored with the model");
  tr->add_option("--out", tr_out, "model file to write")->required();

  // represent
  auto *rep = app.add_subcommand("represent", "build protein vectors");
  std::string rep_method = "smilesvec", rep_tokens = "word", rep_pooling = "avg", rep_model,
              rep_fps, rep_out;
  SelectionOpts rep_sel;
  rep->add_option("--method", rep_method, "smilesvec|fingerprint|protvec");
  rep->add_option("--tokens", rep_tokens, "word|char");
  rep->add_option("--pooling", rep_pooling, "avg|minmax (minmax: protvec only)");
  rep->add_option("--model", rep_model, "embedding model");
  rep->add_option("--fingerprints", rep_fps, "ligand\\tbits fingerprint table");
  rep_sel.add(rep);
  rep->add_option("--out", rep_out, "vector table to write")->required();

  // similarity
  auto *sim = app.add_subcommand("similarity", "all-pairs protein similarity");
  std::string sim_method = "cosine", sim_vectors, sim_tokens, sim_pairs, sim_out;
  std::size_t sim_threads = 1;
  sim->add_option("--method", sim_method, "cosine|wordfreq");
  sim->add_option("--vectors", sim_vectors, "vector table (cosine)");
  sim->add_option("--tokens", sim_tokens, "token table (wordfreq)");
  sim->add_option("--pairs", sim_pairs, "restrict to these pairs");
  sim->add_option("--threads", sim_threads, "worker threads");
  sim->add_option("--out", sim_out, "similarity file to write")->required();

  // cluster
  auto *cl = app.add_subcommand("cluster", "cluster a similarity matrix");
  std::string cl_sim, cl_algo = "transclust", cl_out;
  std::optional<double> cl_threshold;
  bool cl_lower = false;
  MclOpts cl_mcl;
  cl->add_option("--similarity", cl_sim, "similarity file")->required();
  cl->add_flag("--lower-is-better", cl_lower, "scores are distances (e.g. e-values)");
  cl->add_option("--algo", cl_algo, "transclust|mcl");
  cl->add_option("--threshold", cl_threshold, "similarity threshold (MCL: filter edges)");
  cl_mcl.add(cl);
  cl->add_option("--out", cl_out, "cluster file to write")->required();

  // evaluate
  auto *ev = app.add_subcommand("evaluate", "F-measure of a clustering against the gold standard");
  std::string ev_clusters, ev_gold, ev_level = "family", ev_out;
  ev->add_option("--clusters", ev_clusters, "cluster file")->required();
  ev->add_option("--gold", ev_gold, "gold standard")->required();
  ev->add_option("--level", ev_level, "family|superfamily");
  ev->add_option("--out", ev_out, "JSON report to write");

  // sweep
  auto *sw = app.add_subcommand("sweep", "threshold sweep maximising the F-measure");
  std::string sw_sim, sw_gold, sw_algo = "transclust", sw_level = "family", sw_preset, sw_curve,
              sw_summary;
  std::optional<double> sw_lo, sw_hi, sw_step;
  bool sw_lower = false;
  std::size_t sw_threads = 1;
  MclOpts sw_mcl;
  sw->add_option("--similarity", sw_sim, "similarity file")->required();
  sw->add_flag("--lower-is-better", sw_lower, "scores are distances");
  sw->add_option("--gold", sw_gold, "gold standard")->required();
  sw->add_option("--algo", sw_algo, "transclust|mcl");
  sw->add_option("--level", sw_level, "family|superfamily");
  sw->add_option("--preset", sw_preset, "unit ([0,1] step 0.001) | blast ([0,100] step 0.05)");
  sw->add_option("--lo", sw_lo, "grid start");
  sw->add_option("--hi", sw_hi, "grid end");
  sw->add_option("--step", sw_step, "grid step");
  sw->add_option("--threads", sw_threads, "worker threads");
  sw_mcl.add(sw);
  sw->add_option("--curve", sw_curve, "curve TSV to write");
  sw->add_option("--summary", sw_summary, "summary JSON to write");

  // correlate
  auto *co = app.add_subcommand("correlate", "Pearson correlation of two similarity matrices");
  std::string co_a, co_b, co_out;
  bool co_a_lower = false, co_b_lower = false;
  co->add_option("--a", co_a, "first similarity file")->required();
  co->add_option("--b", co_b, "second similarity file")->required();
  co->add_flag("--a-lower-is-better", co_a_lower, "first file holds distances");
  co->add_flag("--b-lower-is-better", co_b_lower, "second file holds distances");
  co->add_option("--out", co_out, "JSON result to write");

  // pipeline
  auto *pl = app.add_subcommand("pipeline", "run the full chain from a config file");
  std::string pl_config, pl_output;
  std::vector<std::string> pl_set;
  pl->add_option("--config", pl_config, "key = value config file")->required();
  pl->add_option("--output-dir", pl_output, "override output_dir");
  pl->add_option("--set", pl_set, "override a setting, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    if (code != 0 && std::string(e.get_name()) != "CallForHelp") std::cerr << app.help();
    return code;
  }

  try {
    if (*fetch) {
      std::vector<std::string> domains;
      for (auto &line : io::read_lines(fetch_domains)) {
        auto id = io::trim(line);
        if (!id.empty()) domains.emplace_back(id);
      }
      HttpTransport transport;
      AcquisitionClient client(acq, transport);
      auto results = client.acquire(domains, fetch_workers);
      for (const auto &r : results) {
        if (!r.error.empty()) std::cerr << "warning: " << r.domain_id << ": " << r.error << '\n';
        if (r.dropped_without_smiles) {
          std::cerr << "warning: " << r.domain_id << ": " << r.dropped_without_smiles
                    << " records without SMILES dropped\n";
        }
      }
      io::save_interactions(fetch_out, to_interactions(results));
    } else if (*tok) {
      auto spec = token_spec(parse_token_kind(tok_kind), tok_k);
      std::vector<io::TokenRow> rows;
      if (!tok_input.empty()) {
        bool protein = spec.kind == TokenKind::protein_word || spec.kind == TokenKind::protein_char;
        if (protein) {
          for (auto &[id, seq] : io::load_sequences(tok_input)) rows.push_back({id, tokenize(seq, spec)});
        } else {
          auto smiles = io::load_smiles_corpus(tok_input);
          for (std::size_t i = 0; i < smiles.size(); ++i) {
            rows.push_back({std::to_string(i + 1), tokenize(smiles[i], spec)});
          }
        }
      } else {
        Method m = spec.kind == TokenKind::smiles_word ? Method::smiles_wordfreq
                   : spec.kind == TokenKind::protein_word
                       ? Method::protein_wordfreq
                       : throw ConfigError("per-protein tokens use smiles_word or protein_word");
        auto l = load_selection(tok_sel, m == Method::protein_wordfreq);
        rows = tokenize_stage(m, spec.k, l.interactions ? &*l.interactions : nullptr,
                              l.sequences ? &*l.sequences : nullptr,
                              l.proteins ? &*l.proteins : nullptr);
      }
      io::save_tokens(tok_out, rows);
    } else if (*tr) {
      auto spec = token_spec(parse_token_kind(tr_kind), tr_k);
      tc.validate();
      auto l = load_selection(tr_sel, false);
      auto texts = training_texts(spec.kind, tr_corpus, l.interactions ? &*l.interactions : nullptr,
                                  l.sequences ? &*l.sequences : nullptr);
      train_stage(texts, spec, tc, tr_tag, tr_out);
    } else if (*rep) {
      PipelineConfig pc;
      pc.set("method", rep_method);
      pc.set("tokens", rep_tokens);
      Method m = pc.method;
      auto l = load_selection(rep_sel, uses_sequences(m));
      std::optional<EmbeddingModel> model;
      if (!rep_model.empty()) model = io::load_model(rep_model);
      std::optional<FingerprintTable> fps;
      if (!rep_fps.empty()) fps = io::load_fingerprints(rep_fps);
      RepresentInputs in;
      in.method = m;
      in.token_kind = pc.token_kind();
      in.pooling = parse_pooling(rep_pooling);
      in.interactions = l.interactions ? &*l.interactions : nullptr;
      in.model = model ? &*model : nullptr;
      in.fingerprints = fps ? &*fps : nullptr;
      in.sequences = l.sequences ? &*l.sequences : nullptr;
      in.proteins = l.proteins ? &*l.proteins : nullptr;
      StageLog log;
      io::save_vectors(rep_out, represent_stage(in, log));
      warn(log.warnings);
    } else if (*sim) {
      std::optional<std::set<IdPair>> pairs;
      if (!sim_pairs.empty()) pairs = io::load_pairs(sim_pairs);
      SimilarityMatrix matrix;
      if (sim_method == "cosine") {
        if (sim_vectors.empty()) throw ConfigError("cosine similarity needs --vectors");
        matrix = cosine_similarity_stage(io::load_vectors(sim_vectors), pairs ? &*pairs : nullptr,
                                         sim_threads);
      } else if (sim_method == "wordfreq") {
        if (sim_tokens.empty()) throw ConfigError("word-frequency similarity needs --tokens");
        matrix = wordfreq_similarity_stage(io::load_tokens(sim_tokens), pairs ? &*pairs : nullptr,
                                           sim_threads);
      } else {
        throw ConfigError("unknown similarity method '" + sim_method + "'");
      }
      io::save_similarity(sim_out, matrix);
    } else if (*cl) {
      cl_mcl.config.validate();
      auto matrix = io::load_similarity(cl_sim, orientation(cl_lower));
      ClusterRun run{parse_algorithm(cl_algo), cl_threshold.value_or(0), cl_mcl.config,
                     cl_threshold.has_value()};
      if (run.algorithm == Algorithm::transclust && !cl_threshold) {
        throw ConfigError("transclust needs --threshold");
      }
      cluster_stage(matrix, run, cl_out);
    } else if (*ev) {
      auto report = evaluate_stage(io::load_clusters(ev_clusters), io::load_gold_standard(ev_gold),
                                   parse_level(ev_level), ev_out);
      std::cout << "F-measure\t" << io::format_real(report.f) << '\n';
    } else if (*sw) {
      sw_mcl.config.validate();
      SweepGrid grid = sw_preset.empty() ? SweepGrid::unit() : SweepGrid::preset(sw_preset);
      if (sw_lo) grid.lo = *sw_lo;
      if (sw_hi) grid.hi = *sw_hi;
      if (sw_step) grid.step = *sw_step;
      auto result = sweep_stage(io::load_similarity(sw_sim, orientation(sw_lower)),
                                io::load_gold_standard(sw_gold), parse_algorithm(sw_algo),
                                parse_level(sw_level), grid, sw_mcl.config, sw_threads, sw_curve,
                                sw_summary);
      std::cout << "best_threshold\t" << io::format_real(result.best_threshold) << "\nbest_f\t"
                << io::format_real(result.best_f) << '\n';
    } else if (*co) {
      auto r = pearson(io::load_similarity(co_a, orientation(co_a_lower)),
                       io::load_similarity(co_b, orientation(co_b_lower)));
      if (!co_out.empty()) io::write_file_atomic(co_out, correlate_json(r).dump(2) + '\n');
      std::cout << "pearson\t" << io::format_real(r.r) << "\ncommon_pairs\t" << r.common_pairs
                << '\n';
    } else if (*pl) {
      auto cfg = PipelineConfig::load(pl_config);
      for (const auto &kv : pl_set) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(std::string(io::trim(std::string_view(kv).substr(0, eq))),
                std::string(io::trim(std::string_view(kv).substr(eq + 1))));
      }
      if (!pl_output.empty()) cfg.output_dir = pl_output;
      std::optional<HttpTransport> transport;
      if (cfg.interactions.empty()) transport.emplace();
      auto res = run_pipeline(cfg, transport ? &*transport : nullptr);
      warn(res.warnings);
      std::cout << "proteins\t" << res.proteins << "\nbest_threshold\t"
                << io::format_real(res.best_threshold) << "\nf_measure\t"
                << io::format_real(res.f_measure) << "\nclusters\t" << res.clusters
                << "\nreport\t" << (cfg.output_dir / "report.json").generic_string() << '\n';
    }
  } catch (const StageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::string stage = app.get_subcommands().empty() ? "ligvec" : app.get_subcommands()[0]->get_name();
    std::cerr << "error: " << stage << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
