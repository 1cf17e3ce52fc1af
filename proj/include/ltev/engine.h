#ifndef LTEV_ENGINE_H
#define LTEV_ENGINE_H

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace ltev
{

using TimeMs = std::int64_t;

enum class EventKind
{
    APP_ARRIVAL,
    SUBFRAME_TICK,
    SHADOW_BLOCK,
    RLC_TIMER,
    SIM_END,
};

struct EventPayload
{
    int vehicle{0};
    int peer{0};
    std::uint64_t token{0};
};

struct Event
{
    TimeMs time_ms{0};
    std::uint64_t seq{0};
    EventKind kind{EventKind::SIM_END};
    EventPayload payload{};
};

/**
 * Discrete-event queue at millisecond granularity. Events fire in
 * (time_ms, seq) order; seq is assigned at scheduling time, so same-time
 * events fire in the order they were scheduled.
 */
class Engine
{
  public:
    using Handler = std::function<void(const Event&)>;

    /// Throws std::logic_error when time_ms < Now().
    std::uint64_t Schedule(TimeMs timeMs, EventKind kind, EventPayload payload = {});

    /**
     * Fire every queued event with time_ms <= tEnd, including those
     * scheduled by handlers along the way. Returns the number fired.
     */
    std::uint64_t RunUntil(TimeMs tEnd, const Handler& handler);

    TimeMs Now() const
    {
        return m_now;
    }

    std::size_t Pending() const
    {
        return m_queue.size();
    }

  private:
    struct Later
    {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time_ms != b.time_ms ? a.time_ms > b.time_ms : a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> m_queue;
    std::uint64_t m_nextSeq{0};
    TimeMs m_now{0};
};

} // namespace ltev

#endif /* LTEV_ENGINE_H */
