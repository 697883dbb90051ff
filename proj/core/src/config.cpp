// SPDX-License-Identifier: Apache-2.0
//
// cfmc: subgroup-centric multicast simulator for cell-free massive MIMO
// Copyright (C) 2026 The cfmc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cfmc/harness.hpp"

namespace cfmc
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto first = s.find_first_not_of(" \t\r\n");
            if (first == std::string::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r\n");
            return s.substr(first, last - first + 1);
        }

        std::vector<std::string> split_list(const std::string &text)
        {
            std::vector<std::string> items;
            std::string item;
            std::istringstream ss(text);
            while (std::getline(ss, item, ','))
            {
                item = trim(item);
                if (!item.empty())
                    items.push_back(item);
            }
            return items;
        }

        std::uint64_t parse_u64(const std::string &field, const std::string &text)
        {
            const std::string t = trim(text);
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
                throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
            return v;
        }

        std::size_t parse_count(const std::string &field, const std::string &text)
        {
            const auto v = parse_u64(field, text);
            if (v > std::numeric_limits<std::size_t>::max())
                throw ConfigError(field, "value out of range");
            return static_cast<std::size_t>(v);
        }

        double parse_real(const std::string &field, const std::string &text)
        {
            const std::string t = trim(text);
            char *end = nullptr;
            const double v = std::strtod(t.c_str(), &end);
            if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
                throw ConfigError(field, "expected a finite number, got '" + text + "'");
            return v;
        }

        bool parse_bool(const std::string &field, const std::string &text)
        {
            std::string t = trim(text);
            std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
            if (t == "true" || t == "yes" || t == "on" || t == "1")
                return true;
            if (t == "false" || t == "no" || t == "off" || t == "0")
                return false;
            throw ConfigError(field, "expected true/false, got '" + text + "'");
        }

        // "COUNTxUSERS" or "COUNTxUSERS@SIDE", e.g. "2x4" or "1x24@10".
        std::vector<ClusterGroup> parse_clusters(const std::string &text)
        {
            std::vector<ClusterGroup> groups;
            for (const auto &item : split_list(text))
            {
                ClusterGroup c;
                std::string body = item;
                if (const auto at = body.find('@'); at != std::string::npos)
                {
                    c.hotspot_side_m = parse_real("clusters", body.substr(at + 1));
                    body = body.substr(0, at);
                }
                const auto x = body.find_first_of("xX");
                if (x == std::string::npos)
                    throw ConfigError("clusters", "expected COUNTxUSERS, got '" + item + "'");
                c.count = parse_count("clusters", body.substr(0, x));
                c.users_per_cluster = parse_count("clusters", body.substr(x + 1));
                groups.push_back(c);
            }
            return groups;
        }

        std::string format_real(double v)
        {
            std::ostringstream ss;
            ss << std::setprecision(17) << v;
            return ss.str();
        }

        template <typename T>
        std::string join(const std::vector<T> &items)
        {
            std::ostringstream ss;
            for (std::size_t i = 0; i < items.size(); ++i)
                ss << (i ? "," : "") << items[i];
            return ss.str();
        }

        bool is_preset(const std::string &name)
        {
            const auto names = scenario_preset_names();
            return std::find(names.begin(), names.end(), name) != names.end();
        }
    }

    std::vector<std::size_t> parse_count_list(const std::string &field, const std::string &text)
    {
        std::vector<std::size_t> out;
        for (const auto &item : split_list(text))
            out.push_back(parse_count(field, item));
        if (out.empty())
            throw ConfigError(field, "list is empty");
        return out;
    }

    void apply_setting(RunConfig &cfg, const std::string &raw_key, const std::string &value)
    {
        const std::string key = trim(raw_key);
        const std::string v = trim(value);
        auto &pm = cfg.propagation;

        if (key == "scenario")
        {
            if (is_preset(v))
                cfg.scenario = scenario_preset(v);
            else
                cfg.scenario = ScenarioSpec{v, 0, {}};
        }
        else if (key == "uniform_ues")
            cfg.scenario.n_uniform = parse_count(key, v);
        else if (key == "clusters")
            cfg.scenario.clusters = parse_clusters(v);
        else if (key == "area_side_m")
            cfg.area.side_m = parse_real(key, v);
        else if (key == "wrap_around")
            cfg.area.wrap_around = parse_bool(key, v);
        else if (key == "ap_layout")
        {
            if (v == "uniform")
                cfg.ap_layout = ApLayout::uniform;
            else if (v == "grid")
                cfg.ap_layout = ApLayout::grid;
            else
                throw ConfigError(key, "expected uniform or grid, got '" + v + "'");
        }
        else if (key == "L")
            cfg.num_aps = parse_count(key, v);
        else if (key == "K")
            cfg.num_ues = parse_count(key, v);
        else if (key == "N" || key == "antennas")
            cfg.antennas = parse_count_list("N", v);
        else if (key == "groups" || key == "G")
            cfg.groups = parse_count_list("groups", v);
        else if (key == "precoders" || key == "precoder")
        {
            cfg.precoders.clear();
            for (const auto &item : split_list(v))
            {
                if (item == "all")
                {
                    cfg.precoders = {PrecoderVariant::cb, PrecoderVariant::ncb, PrecoderVariant::ecb};
                    continue;
                }
                const auto p = parse_precoder(item);
                if (!p)
                    throw ConfigError("precoders", "unknown precoder '" + item + "' (expected cb, ncb, ecb or all)");
                cfg.precoders.push_back(*p);
            }
            if (cfg.precoders.empty())
                throw ConfigError("precoders", "list is empty");
        }
        else if (key == "nu")
            cfg.nu = parse_real(key, v);
        else if (key == "dl_power_dbm")
            cfg.pdl_mw = dbm_to_mw(parse_real(key, v));
        else if (key == "dl_power_mw")
            cfg.pdl_mw = parse_real(key, v);
        else if (key == "pilot_power_dbm")
            cfg.pilot_power_mw = dbm_to_mw(parse_real(key, v));
        else if (key == "pilot_power_mw")
            cfg.pilot_power_mw = parse_real(key, v);
        else if (key == "ecb_mc_samples")
            cfg.ecb_mc_samples = parse_count(key, v);
        else if (key == "tau_c")
            cfg.tau_c = parse_count(key, v);
        else if (key == "tau_p_cap")
            cfg.tau_p_cap = parse_count(key, v);
        else if (key == "pathloss_ref_db")
            pm.pathloss_ref_db = parse_real(key, v);
        else if (key == "pathloss_exp")
            pm.pathloss_exp = parse_real(key, v);
        else if (key == "shadow_std_db")
            pm.shadow_std_db = parse_real(key, v);
        else if (key == "noise_ul_dbm")
            pm.noise_ul_dbm = parse_real(key, v);
        else if (key == "noise_dl_dbm")
            pm.noise_dl_dbm = parse_real(key, v);
        else if (key == "asd_deg")
            pm.asd_deg = parse_real(key, v);
        else if (key == "correlation")
        {
            if (v == "local-scattering")
                pm.correlation_mode = CorrelationMode::local_scattering;
            else if (v == "uncorrelated")
                pm.correlation_mode = CorrelationMode::uncorrelated;
            else
                throw ConfigError(key, "expected local-scattering or uncorrelated, got '" + v + "'");
        }
        else if (key == "min_distance_m")
            pm.min_distance_m = parse_real(key, v);
        else if (key == "shadow_decorrelation_m")
            pm.shadow_decorrelation_m = parse_real(key, v);
        else if (key == "deployments")
            cfg.n_deployments = parse_count(key, v);
        else if (key == "fading")
            cfg.n_fading = parse_count(key, v);
        else if (key == "seed")
            cfg.master_seed = parse_u64(key, v);
        else if (key == "out")
            cfg.output_dir = v;
        else if (key == "threads")
            cfg.threads = parse_count(key, v);
        else if (key == "ase_mode")
        {
            if (v == "weighted")
                cfg.ase_mode = AseMode::weighted;
            else if (v == "plain")
                cfg.ase_mode = AseMode::plain;
            else
                throw ConfigError(key, "expected weighted or plain, got '" + v + "'");
        }
        else if (key == "diagnostics")
            cfg.diagnostics = parse_bool(key, v);
        else
            throw ConfigError(key, "unknown setting");
    }

    RunConfig parse_config(std::istream &in, RunConfig base)
    {
        RunConfig cfg = std::move(base);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        }
        return cfg;
    }

    RunConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("config", "cannot open '" + path.string() + "'");
        return parse_config(in);
    }

    void RunConfig::validate() const
    {
        if (scenario.total_ues() == 0)
            throw ConfigError("scenario", "'" + scenario.name +
                                              "' is not a preset and defines no uniform_ues/clusters");
        scenario.validate(area);
        if (num_aps < 1)
            throw ConfigError("L", "at least one AP is required");
        const std::size_t K = total_ues();
        if (num_ues && *num_ues != K)
            throw ConfigError("K", "scenario '" + scenario.name + "' places " + std::to_string(K) +
                                       " UEs but K = " + std::to_string(*num_ues));
        if (antennas.empty())
            throw ConfigError("N", "list is empty");
        for (std::size_t n : antennas)
            if (n < 1)
                throw ConfigError("N", "antenna count must be at least 1");
        if (groups.empty())
            throw ConfigError("groups", "list is empty");
        for (std::size_t g : groups)
            if (g < 1 || g > K)
                throw ConfigError("groups", "G = " + std::to_string(g) + " outside [1, K = " + std::to_string(K) + "]");
        if (precoders.empty())
            throw ConfigError("precoders", "list is empty");
        if (tau_p_cap < 1)
            throw ConfigError("tau_p_cap", "must be at least 1");
        for (std::size_t g : groups)
            if (std::min(g, tau_p_cap) >= tau_c)
                throw ConfigError("tau_c", "tau_p = " + std::to_string(std::min(g, tau_p_cap)) +
                                               " must be shorter than tau_c = " + std::to_string(tau_c));
        const bool has_ecb = std::find(precoders.begin(), precoders.end(), PrecoderVariant::ecb) != precoders.end();
        if (has_ecb)
            for (std::size_t n : antennas)
                if (n < 2)
                    throw ConfigError("N", "ECB requires N >= 2 (E{||hhat||^-2} diverges for N = 1)");
        if (!(pilot_power_mw > 0.0))
            throw ConfigError("pilot_power_dbm", "must be positive");
        precoder_config(PrecoderVariant::cb).validate();
        propagation.validate();
        if (n_deployments < 1)
            throw ConfigError("deployments", "must be at least 1");
        if (n_fading < 2)
            throw ConfigError("fading", "at least 2 fading realizations are required");
        if (threads < 1)
            throw ConfigError("threads", "must be at least 1");
    }

    std::string to_config_text(const RunConfig &cfg)
    {
        std::ostringstream out;
        const auto &pm = cfg.propagation;
        std::vector<std::string> clusters;
        for (const auto &c : cfg.scenario.clusters)
            clusters.push_back(std::to_string(c.count) + "x" + std::to_string(c.users_per_cluster) + "@" +
                               format_real(c.hotspot_side_m));
        std::vector<std::string> precoders;
        for (auto p : cfg.precoders)
            precoders.push_back(to_string(p));

        out << "scenario = " << cfg.scenario.name << '\n'
            << "uniform_ues = " << cfg.scenario.n_uniform << '\n'
            << "clusters = " << join(clusters) << '\n'
            << "area_side_m = " << format_real(cfg.area.side_m) << '\n'
            << "wrap_around = " << (cfg.area.wrap_around ? "true" : "false") << '\n'
            << "ap_layout = " << (cfg.ap_layout == ApLayout::grid ? "grid" : "uniform") << '\n'
            << "L = " << cfg.num_aps << '\n';
        if (cfg.num_ues)
            out << "K = " << *cfg.num_ues << '\n';
        out << "N = " << join(cfg.antennas) << '\n'
            << "groups = " << join(cfg.groups) << '\n'
            << "precoders = " << join(precoders) << '\n'
            << "nu = " << format_real(cfg.nu) << '\n'
            << "dl_power_mw = " << format_real(cfg.pdl_mw) << '\n'
            << "pilot_power_mw = " << format_real(cfg.pilot_power_mw) << '\n'
            << "ecb_mc_samples = " << cfg.ecb_mc_samples << '\n'
            << "tau_c = " << cfg.tau_c << '\n'
            << "tau_p_cap = " << cfg.tau_p_cap << '\n'
            << "pathloss_ref_db = " << format_real(pm.pathloss_ref_db) << '\n'
            << "pathloss_exp = " << format_real(pm.pathloss_exp) << '\n'
            << "shadow_std_db = " << format_real(pm.shadow_std_db) << '\n'
            << "noise_ul_dbm = " << format_real(pm.noise_ul_dbm) << '\n'
            << "noise_dl_dbm = " << format_real(pm.noise_dl_dbm) << '\n'
            << "asd_deg = " << format_real(pm.asd_deg) << '\n'
            << "correlation = "
            << (pm.correlation_mode == CorrelationMode::uncorrelated ? "uncorrelated" : "local-scattering") << '\n'
            << "min_distance_m = " << format_real(pm.min_distance_m) << '\n'
            << "shadow_decorrelation_m = " << format_real(pm.shadow_decorrelation_m) << '\n'
            << "deployments = " << cfg.n_deployments << '\n'
            << "fading = " << cfg.n_fading << '\n'
            << "seed = " << cfg.master_seed << '\n'
            << "out = " << cfg.output_dir.string() << '\n'
            << "threads = " << cfg.threads << '\n'
            << "ase_mode = " << (cfg.ase_mode == AseMode::plain ? "plain" : "weighted") << '\n'
            << "diagnostics = " << (cfg.diagnostics ? "true" : "false") << '\n';
        return out.str();
    }
}
