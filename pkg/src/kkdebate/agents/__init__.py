from .base import TIER_RANK, Agent, AgentSpec, SupervisorError, Tier
from .client import ChatClient, EndpointError, OfflineClient, OfflineError
from .judge import Rating, judge_rationality, judge_transcript
from .remote import MalformedResponse, RemoteAgent, extract_json
from .scripted import ScriptedAgent, ScriptedProfile


def make_agent(spec: AgentSpec, game_seed: int, client=None) -> Agent:
    """Fresh per-game agent for ``spec``; remote agents need ``client``."""
    if spec.kind == "scripted":
        return ScriptedAgent(spec, ScriptedProfile.parse(spec.model), game_seed)
    if client is None:
        raise OfflineError(f"agent {spec.name} needs an endpoint client")
    return RemoteAgent(spec, client, game_seed)


__all__ = [
    "Agent", "AgentSpec", "ChatClient", "EndpointError", "MalformedResponse", "OfflineClient",
    "OfflineError", "Rating", "RemoteAgent", "ScriptedAgent", "ScriptedProfile", "SupervisorError",
    "TIER_RANK", "Tier", "extract_json", "judge_rationality", "judge_transcript", "make_agent",
]
