#include "xformplay/session_io/cli.hpp"

#include <csignal>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "xformplay/error.hpp"
#include "xformplay/session_io/codec.hpp"
#include "xformplay/session_io/event_log.hpp"
#include "xformplay/session_io/puzzle_file.hpp"
#include "xformplay/session_io/server.hpp"
#include "xformplay/session_io/service.hpp"
#include "xformplay/session_io/snapshot.hpp"

namespace xformplay::io {

namespace {

// Keeps an optional log in step with the state: every accepted event is
// appended together with the status it produced.
class Recorder {
 public:
  Recorder(const PuzzleSpec& spec, const std::string& log_path) {
    if (!log_path.empty()) writer_.emplace(EventLogWriter::create(log_path, header_for(spec)));
  }

  void record(const GameState& state) {
    if (writer_ && !state.event_log.empty()) append_event(*writer_, state.event_log.back(), state.status);
  }

 private:
  std::optional<EventLogWriter> writer_;
};

double parse_number(const std::string& word) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(word, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != word.size() || word.empty()) throw Error(ErrorCode::InvalidParameter, "not a number: '" + word + "'");
  return v;
}

Axis parse_axis(const std::string& word) {
  if (word == "x") return Axis::X;
  if (word == "y") return Axis::Y;
  if (word == "z") return Axis::Z;
  throw Error(ErrorCode::InvalidParameter, "axis must be x, y or z, got '" + word + "'");
}

// "translate X Y Z" | "rotate AXIS DEG" | "scale F", with t/r/s shorthands.
TransformStep parse_step(std::istringstream& words) {
  std::string op;
  words >> op;
  std::vector<std::string> args;
  for (std::string w; words >> w;) args.push_back(w);
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw Error(ErrorCode::InvalidParameter, op + " takes " + std::to_string(n) + " argument(s)");
  };
  if (op == "translate" || op == "t") {
    want(3);
    return Translate{{parse_number(args[0]), parse_number(args[1]), parse_number(args[2])}};
  }
  if (op == "rotate" || op == "r") {
    want(2);
    return Rotate{parse_axis(args[0]), Angle::degrees(parse_number(args[1]))};
  }
  if (op == "scale" || op == "s") {
    want(1);
    return Scale{parse_number(args[0])};
  }
  throw Error(ErrorCode::InvalidParameter, "unknown step '" + op + "' (translate, rotate or scale)");
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void print_error(std::ostream& err, const Error& e) {
  err << "error: " << code_name(e.code()) << ": " << e.what() << "\n";
}

void print_panel(std::ostream& out, const MatrixPanel& panel) {
  for (const auto& row : panel.rows) {
    out << panel_theme_name(row.theme) << ":\n";
    for (int i = 0; i < 4; ++i) {
      out << " ";
      for (int j = 0; j < 4; ++j) out << " " << std::setw(10) << format_number(row.cells[i * 4 + j]);
      out << "\n";
    }
  }
  if (panel.expansion) {
    const auto& ex = panel.expansion->expansion;
    out << "expansion (row " << panel.expansion->row << "):\n";
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const auto& c = ex.cell(i, j);
        out << "  [" << i + 1 << "," << j + 1 << "] =";
        for (int k = 0; k < 4; ++k)
          out << (k ? " + " : " ") << format_number(c.terms[k].left) << "*" << format_number(c.terms[k].right);
        out << " = " << format_number(c.sum) << "\n";
      }
    }
  }
}

void print_status(std::ostream& out, const GameState& state) {
  const PoseError e = pose_error(state.virtual_matrix, state.physical_matrix, state.spec.weights);
  out << "seq " << state.event_log.size() << ": " << status_name(state.status) << ", moves " << state.move_count
      << ", error t=" << format_number(e.translation) << " r=" << format_number(e.rotation)
      << " s=" << format_number(e.scale) << "\n";
}

int cmd_gen(std::uint64_t seed, const std::string& level, int difficulty, const std::string& output,
            std::ostream& out) {
  PuzzleFile file;
  file.spec = generate_puzzle(seed, parse_level(level), difficulty);
  file.model = default_brick_model();
  if (output.empty()) {
    out << puzzle_to_text(file);
  } else {
    save_puzzle(output, file);
  }
  return 0;
}

int cmd_solve(const std::string& puzzle_path, const std::string& log_path, const std::string& snapshot_path,
              std::ostream& out) {
  const PuzzleFile file = load_puzzle(puzzle_path);
  Recorder rec(file.spec, log_path);
  std::int64_t clock = 0;
  GameState state = new_session(file.spec);
  for (const auto& step : file.spec.target_steps) {
    state = apply_physical(std::move(state), step, clock++);
    rec.record(state);
    out << "phys " << describe(step) << "\n";
  }
  int steps = 0;
  constexpr int kGiveUp = 16;
  while (state.status != Status::Solved && steps < kGiveUp) {
    const auto hint = session_hint(state);
    if (!hint) break;
    ++steps;
    out << "hint " << steps << ": virt " << describe(hint->step) << " (residual " << format_number(hint->residual_after)
        << ")\n";
    state = apply_virtual(std::move(state), hint->step, clock++);
    rec.record(state);
  }
  if (!snapshot_path.empty()) save_snapshot(snapshot_path, snapshot(state, file.model));
  if (state.status != Status::Solved) {
    out << "status: playing after " << steps << " steps\n";
    return 1;
  }
  out << "status: solved in " << steps << " steps\n";
  return 0;
}

int cmd_replay(const std::string& log_path, const std::string& puzzle_path, bool verify,
               const std::string& snapshot_path, std::ostream& out, std::ostream& err) {
  const EventLogFile log = read_log(log_path);
  for (const auto& w : log.warnings) err << "warning: " << w << "\n";
  if (log.header.engine_version != kEngineVersion)
    throw Error(ErrorCode::VersionMismatch, "log written by engine " + log.header.engine_version + ", this is " +
                                                kEngineVersion);
  const PuzzleFile file = load_puzzle(puzzle_path);
  if (log.header.puzzle_id != file.spec.id)
    throw Error(ErrorCode::CorruptLog,
                "log is for puzzle '" + log.header.puzzle_id + "', not '" + file.spec.id + "'");

  GameState state = new_session(file.spec);
  std::optional<std::int64_t> mismatch;
  for (const auto& entry : log.entries) {
    try {
      state = apply_event(std::move(state), entry.event);
    } catch (Error& e) {
      const std::int64_t seq = entry.event.sequence_no;
      Error halted(e.code(), "replay halted at sequence_no " + std::to_string(seq) + ": " + e.what());
      halted.with_sequence_no(seq);
      throw halted;
    }
    if (!mismatch && state.status != entry.status_after) mismatch = entry.event.sequence_no;
  }
  if (!snapshot_path.empty()) save_snapshot(snapshot_path, snapshot(state, file.model));
  out << "replayed " << log.entries.size() << " events, status: " << status_name(state.status) << "\n";
  if (!verify) return 0;
  if (mismatch) {
    out << "verify: FAILED, status differs from the log at sequence_no " << *mismatch << "\n";
    return 1;
  }
  if (state.status != log.terminal_status()) {
    out << "verify: FAILED, terminal status differs from the log\n";
    return 1;
  }
  out << "verify: ok\n";
  return 0;
}

const char* kPlayHelp =
    "commands:\n"
    "  phys <step>          move the physical model\n"
    "  virt <step>          append a step to the virtual model\n"
    "  edit <field> <val>   edit the last virtual step (x, y, z, angle, factor)\n"
    "  hint | undo | reset | panel | snapshot | status\n"
    "  select <control>     active control for annotations, or 'none'\n"
    "  quit\n"
    "steps: translate X Y Z | rotate AXIS DEG | scale F  (or t, r, s)\n";

int cmd_play(const std::string& puzzle_path, const std::string& log_path, std::istream& in, std::ostream& out) {
  const PuzzleFile file = load_puzzle(puzzle_path);
  Recorder rec(file.spec, log_path);
  GameState state = new_session(file.spec);
  AnnotationOptions options;
  const auto started = std::chrono::steady_clock::now();
  auto now_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  };

  out << "puzzle " << file.spec.id << " (" << level_name(file.spec.level) << ")\n";
  for (std::string line; std::getline(in, line);) {
    std::istringstream words(line);
    std::string cmd;
    if (!(words >> cmd) || cmd[0] == '#') continue;
    try {
      if (cmd == "quit" || cmd == "exit") break;
      if (cmd == "help") {
        out << kPlayHelp;
      } else if (cmd == "phys" || cmd == "virt") {
        const TransformStep step = parse_step(words);
        state = cmd == "phys" ? apply_physical(state, step, now_ms())
                              : apply_virtual(state, step, now_ms());
        rec.record(state);
        print_status(out, state);
      } else if (cmd == "edit") {
        std::string field, value;
        if (!(words >> field >> value)) throw Error(ErrorCode::InvalidParameter, "edit takes <field> <value>");
        state = edit_virtual_param(state, parse_param_field(field), parse_number(value), now_ms());
        rec.record(state);
        print_status(out, state);
      } else if (cmd == "undo" || cmd == "reset") {
        state = cmd == "undo" ? undo(state, now_ms()) : reset(state, now_ms());
        rec.record(state);
        print_status(out, state);
      } else if (cmd == "hint") {
        const auto hint = session_hint(state);
        if (hint) {
          out << "hint: virt " << describe(hint->step) << " (residual " << format_number(hint->residual_after)
              << ")\n";
        } else {
          out << "hint: aligned\n";
        }
      } else if (cmd == "select") {
        std::string name;
        words >> name;
        if (name.empty() || name == "none") {
          options.active_control.reset();
        } else {
          options.active_control = parse_control(name);
        }
      } else if (cmd == "panel") {
        print_panel(out, matrix_panel(state));
      } else if (cmd == "snapshot") {
        out << snapshot_text(snapshot(state, file.model, options)) << "\n";
      } else if (cmd == "status") {
        print_status(out, state);
      } else {
        throw Error(ErrorCode::InvalidParameter, "unknown command '" + cmd + "' (try help)");
      }
    } catch (const Error& e) {
      print_error(out, e);
    }
  }
  return 0;
}

int cmd_serve(const std::string& host, std::uint16_t port, const std::string& puzzle_dir, std::ostream& out) {
  // Block the stop signals before any thread exists so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  Server server(ServiceConfig{resolve_puzzle_dir(puzzle_dir)}, host, port);
  server.start();
  out << "listening on " << host << ":" << server.port() << "\n" << std::flush;
  int sig = 0;
  sigwait(&stop_signals, &sig);
  server.stop();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transformation puzzle engine"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string level;
  int difficulty = 1;
  std::string output;
  auto* gen = app.add_subcommand("gen", "Generate a puzzle file");
  gen->add_option("--seed", seed, "Generator seed")->required();
  gen->add_option("--level", level, "motion, mapping or function")->required();
  gen->add_option("--difficulty", difficulty, "1 to 5")->required();
  gen->add_option("-o,--output", output, "Output file (stdout when omitted)");

  std::string puzzle_path;
  std::string log_path;
  std::string snapshot_path;
  auto* solve = app.add_subcommand("solve", "Solve a puzzle by following hints");
  solve->add_option("puzzle", puzzle_path, "Puzzle file")->required();
  solve->add_option("--log", log_path, "Write the session log here");
  solve->add_option("--snapshot", snapshot_path, "Write the final snapshot here");

  bool verify = false;
  auto* rep = app.add_subcommand("replay", "Replay a session log");
  rep->add_option("--log", log_path, "Session log")->required();
  rep->add_option("--puzzle", puzzle_path, "Puzzle file")->required();
  rep->add_flag("--verify", verify, "Exit 0 only if the replay reproduces the logged status");
  rep->add_option("--snapshot", snapshot_path, "Write the final snapshot here");

  auto* play = app.add_subcommand("play", "Interactive session on stdin/stdout");
  play->add_option("--puzzle", puzzle_path, "Puzzle file")->required();
  play->add_option("--log", log_path, "Write the session log here");

  std::string host = "127.0.0.1";
  std::uint16_t port = kDefaultPort;
  std::string puzzle_dir = ".";
  auto* serve = app.add_subcommand("serve", "Run the session service");
  serve->add_option("--port", port, "TCP port, WebSocket and plain lines")->capture_default_str();
  serve->add_option("--puzzle-dir", puzzle_dir, "Puzzle directory (" + std::string(kPuzzleDirEnv) + " wins)");
  serve->add_option("--host", host, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(seed, level, difficulty, output, out);
    if (*solve) return cmd_solve(puzzle_path, log_path, snapshot_path, out);
    if (*rep) return cmd_replay(log_path, puzzle_path, verify, snapshot_path, out, err);
    if (*play) return cmd_play(puzzle_path, log_path, in, out);
    if (*serve) return cmd_serve(host, port, puzzle_dir, out);
  } catch (const Error& e) {
    print_error(err, e);
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace xformplay::io
