from django.urls import path

from .views import BenchParseView

urlpatterns = [
    path('parse/', BenchParseView.as_view(), name='bench-parse'),
]
