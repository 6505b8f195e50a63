"""
URL configuration for d2p_search project.

Only the admin site is exposed; sweep runs and their rows are browsed there.
"""
from django.contrib import admin
from django.urls import path
from django.views.generic import RedirectView

urlpatterns = [
    path('admin/', admin.site.urls),
    path('', RedirectView.as_view(url='/admin/grover/sweeprun/', permanent=False), name='home'),
]
