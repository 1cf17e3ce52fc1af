#include "ltev/engine.h"

#include <stdexcept>
#include <string>

namespace ltev
{

std::uint64_t
Engine::Schedule(TimeMs timeMs, EventKind kind, EventPayload payload)
{
    if (timeMs < m_now)
    {
        throw std::logic_error("cannot schedule at t=" + std::to_string(timeMs) +
                               " before now=" + std::to_string(m_now));
    }
    Event ev{timeMs, m_nextSeq++, kind, payload};
    m_queue.push(ev);
    return ev.seq;
}

std::uint64_t
Engine::RunUntil(TimeMs tEnd, const Handler& handler)
{
    std::uint64_t fired = 0;
    while (!m_queue.empty() && m_queue.top().time_ms <= tEnd)
    {
        Event ev = m_queue.top();
        m_queue.pop();
        m_now = ev.time_ms;
        handler(ev);
        ++fired;
    }
    return fired;
}

} // namespace ltev
