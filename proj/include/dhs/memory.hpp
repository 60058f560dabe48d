#pragma once

#include "dhs/core.hpp"
#include "dhs/problems.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>

namespace dhs
{
    struct MemoryConfig
    {
        std::size_t deep_capacity = 10;     // N_d
        std::size_t shallow_capacity = 5;   // N_s
        std::size_t extended_capacity = 5;  // N_x
        std::size_t elite_depth = 10;
        std::size_t frequency_depth = 10;
        std::size_t characteristic_depth = 10;
        std::size_t spatial_depth = 10;
        std::size_t recentness_depth = 100;
        std::optional<double> tabu_radius;  // unset: 1e-3 x domain diagonal
        std::size_t partitions_per_dim = 4;
        std::size_t grid_dimension_cap = 8;

        /// Throws InvalidInput; requires N_d > N_s and all sizes positive.
        void validate() const;

        bool operator==(const MemoryConfig &) const = default;
    };

    /// Largest grid a bank will allocate.
    inline constexpr std::size_t max_grid_cells = std::size_t{1} << 20;

    using CellId = std::uint64_t;

    /// Uniform partition of the box: k cells per coordinate over the first
    /// min(n, cap) coordinates. Cell ids are little-endian mixed-radix.
    class Grid
    {
    public:
        Grid(const Problem &problem, std::size_t partitions, std::size_t dimension_cap);

        CellId cell_of(std::span<const double> position) const;

        /// Uniform point inside the cell; non-gridded coordinates uniform over the box.
        Vector sample_in(CellId cell, Rng &rng) const;

        std::size_t cell_count() const noexcept { return cells_; }
        std::size_t partitions() const noexcept { return partitions_; }
        std::size_t gridded_dimensions() const noexcept { return gridded_; }

    private:
        Vector lower_;
        Vector upper_;
        std::size_t partitions_;
        std::size_t gridded_;
        std::size_t cells_;
    };

    std::size_t grid_cell_count(std::size_t dimension, std::size_t partitions, std::size_t dimension_cap);

    struct RankedEntry
    {
        Solution solution;
        double key;         // lower ranks first
        std::uint64_t seq;  // record index that created the entry; breaks key ties
    };

    struct TimedEntry
    {
        Solution solution;
        double key;
        std::uint64_t seq;
        std::size_t depth = 0;  // iterations since last visit
    };

    /// One ranking key over three temporal layers: a deep all-time top list,
    /// a shallow top list of recent visits, and an extended buffer holding
    /// the next-best recent visits that backfill the shallow list.
    class TemporalStore
    {
    public:
        TemporalStore(std::size_t deep_capacity, std::size_t shallow_capacity, std::size_t extended_capacity,
                      std::size_t depth_bound);

        void insert(const Solution &solution, double key, std::uint64_t seq);
        void tick();
        void clear_shallow();

        const std::vector<RankedEntry> &deep() const noexcept { return deep_; }
        const std::vector<TimedEntry> &shallow() const noexcept { return shallow_; }
        const std::vector<TimedEntry> &extended() const noexcept { return extended_; }
        std::size_t depth_bound() const noexcept { return depth_bound_; }

    private:
        void insert_deep(const Solution &solution, double key, std::uint64_t seq);
        void insert_recent(const Solution &solution, double key, std::uint64_t seq);

        std::size_t deep_capacity_;
        std::size_t shallow_capacity_;
        std::size_t extended_capacity_;
        std::size_t depth_bound_;
        std::vector<RankedEntry> deep_;
        std::vector<TimedEntry> shallow_;
        std::vector<TimedEntry> extended_;
    };

    /// Ranks by objective value.
    class EliteMemory
    {
    public:
        EliteMemory(const MemoryConfig &config)
            : store_(config.deep_capacity, config.shallow_capacity, config.extended_capacity, config.elite_depth)
        {
        }

        void record(const Solution &s, std::uint64_t seq) { store_.insert(s, s.value, seq); }
        void tick() { store_.tick(); }
        void clear_shallow() { store_.clear_shallow(); }

        const std::vector<RankedEntry> &deep() const noexcept { return store_.deep(); }
        const std::vector<TimedEntry> &shallow() const noexcept { return store_.shallow(); }
        const std::vector<TimedEntry> &extended() const noexcept { return store_.extended(); }

        const Solution *best() const { return deep().empty() ? nullptr : &deep().front().solution; }
        std::vector<Solution> deep_solutions() const;

    private:
        TemporalStore store_;
    };

    /// Score of a candidate given the current incumbent (may be null). Higher is better.
    using CharacteristicFeature = std::function<double(const Solution &candidate, const Solution *incumbent)>;

    /// Negated distance to the incumbent; zero when no incumbent exists yet.
    double proximity_to_incumbent(const Solution &candidate, const Solution *incumbent);

    class CharacteristicMemory
    {
    public:
        CharacteristicMemory(const MemoryConfig &config, CharacteristicFeature feature);

        void record(const Solution &s, const Solution *incumbent, std::uint64_t seq);
        void tick() { store_.tick(); }
        void clear_shallow() { store_.clear_shallow(); }

        // Entries carry key = -score, so deep() is sorted by descending score.
        const std::vector<RankedEntry> &deep() const noexcept { return store_.deep(); }
        const std::vector<TimedEntry> &shallow() const noexcept { return store_.shallow(); }
        const std::vector<TimedEntry> &extended() const noexcept { return store_.extended(); }

    private:
        CharacteristicFeature feature_;
        TemporalStore store_;
    };

    class FrequencyMemory
    {
    public:
        explicit FrequencyMemory(std::size_t depth);

        void record(CellId cell);
        void tick();
        void clear_shallow();

        std::uint64_t deep_count(CellId cell) const;
        std::uint64_t shallow_count(CellId cell) const;
        const std::map<CellId, std::uint64_t> &deep_counts() const noexcept { return deep_; }
        const std::map<CellId, std::uint64_t> &shallow_counts() const noexcept { return shallow_; }
        std::uint64_t total() const noexcept { return total_; }

    private:
        std::map<CellId, std::uint64_t> deep_;
        std::map<CellId, std::uint64_t> shallow_;
        // ring_[head_] collects the current iteration; the ring spans depth + 1 iterations.
        std::vector<std::map<CellId, std::uint64_t>> ring_;
        std::size_t head_ = 0;
        std::uint64_t total_ = 0;
    };

    struct Landmark
    {
        Solution representative;  // best visit in the cell
        std::size_t last_visit = 0;
        std::uint64_t visits = 0;
    };

    class SpatialMemory
    {
    public:
        SpatialMemory(Grid grid, std::size_t depth);

        void record(const Solution &s, CellId cell, std::size_t iteration);

        /// Ascending visit count, ties by ascending cell id. Saturates at cell_count.
        std::vector<CellId> least_visited_cells(std::size_t count) const;

        double coverage() const;
        std::size_t visited_cells() const noexcept { return visited_; }
        std::uint64_t visit_count(CellId cell) const { return counts_.at(cell); }
        const std::map<CellId, Landmark> &landmarks() const noexcept { return landmarks_; }

        /// Cells visited within the shallow window ending at `iteration`.
        std::size_t recent_cells(std::size_t iteration) const;
        void clear_shallow(std::size_t iteration) { epoch_ = iteration; }

        const Grid &grid() const noexcept { return grid_; }

    private:
        Grid grid_;
        std::size_t depth_;
        std::size_t epoch_ = 0;
        std::vector<std::uint32_t> counts_;
        std::map<CellId, Landmark> landmarks_;
        std::size_t visited_ = 0;
    };

    /// Tabu list: ring of the last d_r visited positions.
    class RecentnessMemory
    {
    public:
        explicit RecentnessMemory(std::size_t capacity) : capacity_(capacity) {}

        void push(std::span<const double> position);
        bool is_tabu(std::span<const double> position, double radius) const;

        std::size_t size() const noexcept { return ring_.size(); }
        std::size_t capacity() const noexcept { return capacity_; }
        const std::deque<Vector> &entries() const noexcept { return ring_; }

    private:
        std::size_t capacity_;
        std::deque<Vector> ring_;
    };

    inline bool is_tabu(const RecentnessMemory &memory, std::span<const double> position, double radius)
    {
        return memory.is_tabu(position, radius);
    }

    inline std::vector<CellId> least_visited_cells(const SpatialMemory &memory, std::size_t count)
    {
        return memory.least_visited_cells(count);
    }

    struct MemorySnapshot
    {
        std::vector<Solution> deep_elite;
        std::map<std::uint64_t, std::uint64_t> visit_histogram;  // visits per cell -> number of cells
        double coverage = 0.0;
        std::size_t visited_cells = 0;
        std::size_t total_cells = 0;
        std::uint64_t visits = 0;
        std::size_t iteration = 0;

        bool operator==(const MemorySnapshot &) const = default;
    };

    /// The five memories of one run, on one iteration clock.
    class MemoryBank
    {
    public:
        MemoryBank(const MemoryConfig &config, const Problem &problem, CharacteristicFeature feature = {});

        void record_visit(const Solution &solution);

        /// Advance to `iteration`, which must be current + 1.
        void tick(std::size_t iteration);
        void clear_shallow();

        std::size_t iteration() const noexcept { return iteration_; }
        std::uint64_t visits() const noexcept { return visits_; }
        double tabu_radius() const noexcept { return tabu_radius_; }
        const MemoryConfig &config() const noexcept { return config_; }

        const EliteMemory &elite() const noexcept { return elite_; }
        const FrequencyMemory &frequency() const noexcept { return frequency_; }
        const CharacteristicMemory &characteristic() const noexcept { return characteristic_; }
        const SpatialMemory &spatial() const noexcept { return spatial_; }
        const RecentnessMemory &recentness() const noexcept { return recentness_; }
        RecentnessMemory &recentness() noexcept { return recentness_; }

        const Solution *best() const { return elite_.best(); }
        const Grid &grid() const noexcept { return spatial_.grid(); }

        MemorySnapshot snapshot() const;

    private:
        MemoryConfig config_;
        double tabu_radius_;
        std::size_t iteration_ = 0;
        std::uint64_t visits_ = 0;
        EliteMemory elite_;
        FrequencyMemory frequency_;
        CharacteristicMemory characteristic_;
        SpatialMemory spatial_;
        RecentnessMemory recentness_;
    };
}
