from qpow_cli.feedback import FeedbackManager


def test_disabled_spinner_is_silent(capsys):
    with FeedbackManager(enabled=False).spinner("working"):
        pass
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err == ""


def test_enabled_spinner_runs_the_body():
    ran = []
    with FeedbackManager().spinner("working"):
        ran.append(True)
    assert ran == [True]
