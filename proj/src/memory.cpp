#include "dhs/memory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dhs
{
    void MemoryConfig::validate() const
    {
        if (deep_capacity == 0 || shallow_capacity == 0 || extended_capacity == 0)
            throw InvalidInput("memory capacities N_d, N_s, N_x must be positive");
        if (deep_capacity <= shallow_capacity)
            throw InvalidInput("memory requires N_d > N_s (got N_d = " + std::to_string(deep_capacity) +
                               ", N_s = " + std::to_string(shallow_capacity) + ")");
        if (elite_depth == 0 || frequency_depth == 0 || characteristic_depth == 0 || spatial_depth == 0 ||
            recentness_depth == 0)
            throw InvalidInput("memory temporal depths must be positive");
        if (tabu_radius && !(*tabu_radius > 0.0))
            throw InvalidInput("memory tabu radius must be positive");
        if (partitions_per_dim == 0 || grid_dimension_cap == 0)
            throw InvalidInput("memory grid partitions and dimension cap must be positive");
    }

    std::size_t grid_cell_count(std::size_t dimension, std::size_t partitions, std::size_t dimension_cap)
    {
        const std::size_t gridded = std::min(dimension, dimension_cap);
        std::size_t cells = 1;
        for (std::size_t j = 0; j < gridded; ++j)
        {
            if (cells > max_grid_cells / partitions)
                throw InvalidInput("spatial grid exceeds " + std::to_string(max_grid_cells) +
                                   " cells; lower memory.partitions or memory.n_cap");
            cells *= partitions;
        }
        return cells;
    }

    Grid::Grid(const Problem &problem, std::size_t partitions, std::size_t dimension_cap)
        : lower_(problem.lower()), upper_(problem.upper()), partitions_(partitions),
          gridded_(std::min(problem.dimension(), dimension_cap)),
          cells_(grid_cell_count(problem.dimension(), partitions, dimension_cap))
    {
    }

    CellId Grid::cell_of(std::span<const double> position) const
    {
        CellId id = 0;
        CellId radix = 1;
        const auto k = static_cast<double>(partitions_);
        for (std::size_t j = 0; j < gridded_; ++j)
        {
            const double t = (position[j] - lower_[j]) / (upper_[j] - lower_[j]);
            const double raw = std::floor(t * k);
            const auto idx = static_cast<CellId>(std::clamp(raw, 0.0, k - 1.0));
            id += idx * radix;
            radix *= partitions_;
        }
        return id;
    }

    Vector Grid::sample_in(CellId cell, Rng &rng) const
    {
        if (cell >= cells_)
            throw LookupError("cell id " + std::to_string(cell) + " outside grid");
        Vector x(lower_.size());
        CellId rest = cell;
        for (std::size_t j = 0; j < x.size(); ++j)
        {
            if (j < gridded_)
            {
                const auto idx = static_cast<double>(rest % partitions_);
                rest /= partitions_;
                const double w = (upper_[j] - lower_[j]) / static_cast<double>(partitions_);
                const double lo = lower_[j] + idx * w;
                x[j] = std::min(lo + uniform(rng, 0.0, 1.0) * w, upper_[j]);
            }
            else
            {
                x[j] = uniform(rng, lower_[j], upper_[j]);
            }
        }
        return x;
    }

    TemporalStore::TemporalStore(std::size_t deep_capacity, std::size_t shallow_capacity,
                                 std::size_t extended_capacity, std::size_t depth_bound)
        : deep_capacity_(deep_capacity), shallow_capacity_(shallow_capacity),
          extended_capacity_(extended_capacity), depth_bound_(depth_bound)
    {
    }

    void TemporalStore::insert(const Solution &solution, double key, std::uint64_t seq)
    {
        insert_deep(solution, key, seq);
        insert_recent(solution, key, seq);
    }

    void TemporalStore::insert_deep(const Solution &solution, double key, std::uint64_t seq)
    {
        for (const auto &e : deep_)
            if (e.solution.position == solution.position)
                return;

        // seq grows monotonically, so a new entry sorts after every equal key.
        const auto at = std::upper_bound(deep_.begin(), deep_.end(), key, [](double k, const RankedEntry &e)
                                         { return k < e.key; });
        if (deep_.size() >= deep_capacity_ && at == deep_.end())
            return;
        deep_.insert(at, RankedEntry{solution, key, seq});
        if (deep_.size() > deep_capacity_)
            deep_.pop_back();
    }

    void TemporalStore::insert_recent(const Solution &solution, double key, std::uint64_t seq)
    {
        for (auto *layer : {&shallow_, &extended_})
            for (auto &e : *layer)
                if (e.solution.position == solution.position)
                {
                    e.depth = 0;
                    return;
                }

        const auto by_key = [](double k, const TimedEntry &e)
        { return k < e.key; };
        TimedEntry entry{solution, key, seq, 0};

        if (shallow_.size() < shallow_capacity_)
        {
            shallow_.insert(std::upper_bound(shallow_.begin(), shallow_.end(), key, by_key), std::move(entry));
            return;
        }

        if (key < shallow_.back().key)
        {
            shallow_.insert(std::upper_bound(shallow_.begin(), shallow_.end(), key, by_key), std::move(entry));
            extended_.insert(extended_.begin(), std::move(shallow_.back()));
            shallow_.pop_back();
        }
        else
        {
            extended_.insert(std::upper_bound(extended_.begin(), extended_.end(), key, by_key), std::move(entry));
        }
        if (extended_.size() > extended_capacity_)
            extended_.pop_back();
    }

    void TemporalStore::tick()
    {
        const auto expired = [this](const TimedEntry &e)
        { return e.depth > depth_bound_; };
        for (auto *layer : {&shallow_, &extended_})
        {
            for (auto &e : *layer)
                ++e.depth;
            std::erase_if(*layer, expired);
        }
        while (shallow_.size() < shallow_capacity_ && !extended_.empty())
        {
            shallow_.push_back(std::move(extended_.front()));
            extended_.erase(extended_.begin());
        }
    }

    void TemporalStore::clear_shallow()
    {
        shallow_.clear();
        extended_.clear();
    }

    std::vector<Solution> EliteMemory::deep_solutions() const
    {
        std::vector<Solution> out;
        out.reserve(deep().size());
        for (const auto &e : deep())
            out.push_back(e.solution);
        return out;
    }

    double proximity_to_incumbent(const Solution &candidate, const Solution *incumbent)
    {
        return incumbent ? -distance(candidate.position, incumbent->position) : 0.0;
    }

    CharacteristicMemory::CharacteristicMemory(const MemoryConfig &config, CharacteristicFeature feature)
        : feature_(feature ? std::move(feature) : CharacteristicFeature(proximity_to_incumbent)),
          store_(config.deep_capacity, config.shallow_capacity, config.extended_capacity,
                 config.characteristic_depth)
    {
    }

    void CharacteristicMemory::record(const Solution &s, const Solution *incumbent, std::uint64_t seq)
    {
        store_.insert(s, -feature_(s, incumbent), seq);
    }

    FrequencyMemory::FrequencyMemory(std::size_t depth) : ring_(depth + 1) {}

    void FrequencyMemory::record(CellId cell)
    {
        ++deep_[cell];
        ++shallow_[cell];
        ++ring_[head_][cell];
        ++total_;
    }

    void FrequencyMemory::tick()
    {
        head_ = (head_ + 1) % ring_.size();
        for (const auto &[cell, n] : ring_[head_])
        {
            auto it = shallow_.find(cell);
            it->second -= n;
            if (it->second == 0)
                shallow_.erase(it);
        }
        ring_[head_].clear();
    }

    void FrequencyMemory::clear_shallow()
    {
        for (auto &slot : ring_)
            slot.clear();
        shallow_.clear();
    }

    std::uint64_t FrequencyMemory::deep_count(CellId cell) const
    {
        const auto it = deep_.find(cell);
        return it == deep_.end() ? 0 : it->second;
    }

    std::uint64_t FrequencyMemory::shallow_count(CellId cell) const
    {
        const auto it = shallow_.find(cell);
        return it == shallow_.end() ? 0 : it->second;
    }

    SpatialMemory::SpatialMemory(Grid grid, std::size_t depth)
        : grid_(std::move(grid)), depth_(depth), counts_(grid_.cell_count(), 0)
    {
    }

    void SpatialMemory::record(const Solution &s, CellId cell, std::size_t iteration)
    {
        if (counts_.at(cell)++ == 0)
            ++visited_;
        auto [it, fresh] = landmarks_.try_emplace(cell, Landmark{s, iteration, 0});
        auto &mark = it->second;
        if (!fresh && s.value < mark.representative.value)
            mark.representative = s;
        mark.last_visit = iteration;
        ++mark.visits;
    }

    std::vector<CellId> SpatialMemory::least_visited_cells(std::size_t count) const
    {
        const std::size_t cells = counts_.size();
        count = std::min(count, cells);
        std::vector<CellId> out;
        out.reserve(count);

        if (cells - visited_ >= count)
        {
            for (CellId c = 0; c < cells && out.size() < count; ++c)
                if (counts_[c] == 0)
                    out.push_back(c);
            return out;
        }

        std::vector<CellId> ids(cells);
        std::iota(ids.begin(), ids.end(), CellId{0});
        std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end(),
                          [this](CellId a, CellId b)
                          { return counts_[a] != counts_[b] ? counts_[a] < counts_[b] : a < b; });
        out.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count));
        return out;
    }

    double SpatialMemory::coverage() const
    {
        return static_cast<double>(visited_) / static_cast<double>(counts_.size());
    }

    std::size_t SpatialMemory::recent_cells(std::size_t iteration) const
    {
        std::size_t n = 0;
        for (const auto &[cell, mark] : landmarks_)
            if (mark.last_visit >= epoch_ && mark.last_visit + depth_ >= iteration)
                ++n;
        return n;
    }

    void RecentnessMemory::push(std::span<const double> position)
    {
        if (capacity_ == 0)
            return;
        if (ring_.size() == capacity_)
            ring_.pop_front();
        ring_.emplace_back(position.begin(), position.end());
    }

    bool RecentnessMemory::is_tabu(std::span<const double> position, double radius) const
    {
        const double r2 = radius * radius;
        for (const auto &p : ring_)
            if (squared_distance(p, position) <= r2)
                return true;
        return false;
    }

    MemoryBank::MemoryBank(const MemoryConfig &config, const Problem &problem, CharacteristicFeature feature)
        : config_((config.validate(), config)),
          tabu_radius_(config.tabu_radius.value_or(1e-3 * problem.diagonal())),
          elite_(config),
          frequency_(config.frequency_depth),
          characteristic_(config, std::move(feature)),
          spatial_(Grid(problem, config.partitions_per_dim, config.grid_dimension_cap), config.spatial_depth),
          recentness_(config.recentness_depth)
    {
    }

    void MemoryBank::record_visit(const Solution &solution)
    {
        const std::uint64_t seq = visits_++;
        elite_.record(solution, seq);
        characteristic_.record(solution, elite_.best(), seq);
        const CellId cell = spatial_.grid().cell_of(solution.position);
        frequency_.record(cell);
        spatial_.record(solution, cell, iteration_);
        recentness_.push(solution.position);
    }

    void MemoryBank::tick(std::size_t iteration)
    {
        if (iteration != iteration_ + 1)
            throw ContractViolation("memory tick to iteration " + std::to_string(iteration) + " from " +
                                    std::to_string(iteration_) + "; exactly one tick per iteration");
        elite_.tick();
        characteristic_.tick();
        frequency_.tick();
        iteration_ = iteration;
    }

    void MemoryBank::clear_shallow()
    {
        elite_.clear_shallow();
        characteristic_.clear_shallow();
        frequency_.clear_shallow();
        spatial_.clear_shallow(iteration_);
    }

    MemorySnapshot MemoryBank::snapshot() const
    {
        MemorySnapshot snap;
        snap.deep_elite = elite_.deep_solutions();
        for (const auto &[cell, mark] : spatial_.landmarks())
            ++snap.visit_histogram[mark.visits];
        snap.coverage = spatial_.coverage();
        snap.visited_cells = spatial_.visited_cells();
        snap.total_cells = spatial_.grid().cell_count();
        snap.visits = visits_;
        snap.iteration = iteration_;
        return snap;
    }
}
